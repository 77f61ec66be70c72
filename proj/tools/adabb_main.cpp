// Benchmark harness: run / verify / tune over JSON experiment configs.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adabb/diagnostics.hpp"
#include "adabb/problems.hpp"
#include "adabb/solvers.hpp"
#include "adabb/trace_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adabb;

namespace {

constexpr const char* kDataRootEnv = "ADABB_DATA_ROOT";

// A built problem: exactly one of smooth/composite is the primary oracle.
struct BuiltProblem {
  std::string id;
  std::shared_ptr<SmoothOracle> smooth;
  std::shared_ptr<CompositeOracle> composite;
  Vector x0;
  std::optional<double> mu;                // strong convexity, when certified
  std::optional<Vector> x_star_analytic;
  std::optional<double> f_star_analytic;
  std::map<std::string, std::string> meta;

  bool is_composite() const { return composite != nullptr; }
  const SmoothOracle& smooth_part() const {
    return composite ? composite->smooth() : *smooth;
  }
  std::optional<double> lipschitz() const {
    return smooth_part().lipschitz_hint();
  }
  double objective(const Vector& x) const {
    return composite ? composite->smooth().value(x) + composite->nonsmooth_value(x)
                     : smooth->value(x);
  }
};

struct ControllerSpec {
  Controller controller;
  std::string name;
  // FixedGD stepsize source: a number, "one_over_L", or "tuned".
  std::string fixed_mode;  // empty unless FixedGD
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config parse error in " + path + ": " + e.what());
  }
  return j;
}

double jget_num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw Error(std::string("config field '") + key + "' must be a number");
  return j[key].get<double>();
}

std::int64_t jget_int(const json& j, const char* key, std::int64_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer()) throw Error(std::string("config field '") + key + "' must be an integer");
  return j[key].get<std::int64_t>();
}

bool jget_bool(const json& j, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_boolean()) throw Error(std::string("config field '") + key + "' must be a boolean");
  return j[key].get<bool>();
}

std::string jget_str(const json& j, const char* key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string()) throw Error(std::string("config field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::string resolve_data_path(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  if (const char* root = std::getenv(kDataRootEnv))
    return (fs::path(root) / p).string();
  return path;
}

std::shared_ptr<LogisticProblem> build_logistic(const json& jp,
                                                std::uint64_t seed) {
  std::shared_ptr<LogisticProblem> base;
  const std::string type = jget_str(jp, "type", "");
  if (type == "synthetic_logistic") {
    const int m = static_cast<int>(jget_int(jp, "m", 500));
    const int n = static_cast<int>(jget_int(jp, "n", 50));
    base = std::make_shared<LogisticProblem>(
        LogisticProblem::synthetic(m, n, /*gamma=*/0.0, seed));
  } else if (type == "libsvm_logistic") {
    const std::string path = jget_str(jp, "path", "");
    if (path.empty()) throw Error("libsvm_logistic requires 'path'");
    const int cols = static_cast<int>(jget_int(jp, "cols", -1));
    const Dataset ds = load_libsvm_file(resolve_data_path(path), cols);
    base = std::make_shared<LogisticProblem>(ds.features, ds.labels, 0.0);
  } else {
    throw Error("unknown logistic problem type: " + type);
  }
  // Regularization: explicit gamma, or the L/m rule.
  double gamma = 0.0;
  if (jp.contains("gamma")) {
    gamma = jget_num(jp, "gamma", 0.0);
    if (gamma < 0.0) throw Error("gamma must be >= 0");
  } else {
    const std::string rule = jget_str(jp, "gamma_rule", "l_over_m");
    if (rule != "l_over_m") throw Error("unknown gamma_rule: " + rule);
    gamma = LogisticProblem::gamma_rule_l_over_m(base->features());
  }
  if (gamma == 0.0) return base;
  return std::make_shared<LogisticProblem>(base->features(), base->labels(),
                                           gamma);
}

BuiltProblem build_problem(const json& cfg, std::uint64_t seed) {
  if (!cfg.contains("problem") || !cfg["problem"].is_object())
    throw Error("config requires a 'problem' object");
  const json& jp = cfg["problem"];
  const std::string type = jget_str(jp, "type", "");
  if (type.empty()) throw Error("problem requires 'type'");

  BuiltProblem bp;
  bp.id = jget_str(jp, "id", type);

  if (type == "quadratic") {
    const int n = static_cast<int>(jget_int(jp, "n", 10));
    if (n < 1) throw Error("quadratic requires n >= 1");
    const std::string kind = jget_str(jp, "kind", "identity");
    std::shared_ptr<QuadraticProblem> q;
    Vector b = Vector::Ones(n);
    const std::string bkind = jget_str(jp, "b", "ones");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> nd(0.0, 1.0);
    if (bkind == "zero")
      b.setZero();
    else if (bkind == "random")
      for (int i = 0; i < n; ++i) b[i] = nd(rng);
    else if (bkind != "ones")
      throw Error("quadratic b must be ones|zero|random");

    if (kind == "identity") {
      q = std::make_shared<QuadraticProblem>(Matrix::Identity(n, n), b);
    } else if (kind == "diag_logspace") {
      const double lo = jget_num(jp, "lo", 0.1);
      const double hi = jget_num(jp, "hi", 10.0);
      if (!(lo > 0.0) || !(hi >= lo))
        throw Error("diag_logspace requires 0 < lo <= hi");
      Vector d(n);
      for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        d[i] = lo * std::pow(hi / lo, t);
      }
      q = std::make_shared<QuadraticProblem>(
          QuadraticProblem::diagonal(d, b));
    } else if (kind == "random_psd") {
      Matrix G(n, n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) G(i, k) = nd(rng);
      Matrix A = G.transpose() * G / n + 0.05 * Matrix::Identity(n, n);
      q = std::make_shared<QuadraticProblem>(A, b);
    } else {
      throw Error("unknown quadratic kind: " + kind);
    }
    bp.smooth = q;
    bp.mu = q->mu();
    bp.x_star_analytic = q->solve();
    bp.f_star_analytic = q->fstar();
    bp.x0 = Vector::Zero(n);
  } else if (type == "synthetic_logistic" || type == "libsvm_logistic") {
    auto lp = build_logistic(jp, seed);
    bp.smooth = lp;
    bp.x0 = Vector::Zero(lp->dim());
    bp.meta["gamma"] = format_g17(lp->gamma());
    bp.meta["lipschitz_unnormalized"] =
        format_g17(lp->lipschitz_unnormalized());
  } else if (type == "cubic") {
    if (!jp.contains("from") || !jp["from"].is_object())
      throw Error("cubic requires a 'from' logistic problem object");
    auto lp = build_logistic(jp["from"], seed);
    const double M = jget_num(jp, "M", 10.0);
    Vector x_ref = Vector::Zero(lp->dim());
    bp.smooth = std::make_shared<CubicSubproblem>(
        build_cubic_from_logistic(*lp, x_ref, M));
    bp.x0 = Vector::Zero(lp->dim());
    bp.meta["M"] = format_g17(M);
  } else if (type == "lasso") {
    const int m = static_cast<int>(jget_int(jp, "m", 100));
    const int n = static_cast<int>(jget_int(jp, "n", 50));
    const int nnz = static_cast<int>(jget_int(jp, "nnz", 10));
    const double tau_scale = jget_num(jp, "tau_scale", 0.1);
    auto lasso = std::make_shared<LassoProblem>(
        LassoProblem::synthetic(m, n, nnz, tau_scale, seed));
    bp.composite = lasso;
    bp.x0 = Vector::Zero(n);
    bp.meta["tau"] = format_g17(lasso->tau());
  } else {
    throw Error("unknown problem type: " + type);
  }
  return bp;
}

Controller controller_from_name(const std::string& name, const json& cfg) {
  using K = ControllerKind;
  if (name == "adabb") return Controller::adabb(StepOption::II, StepOption::II);
  if (name == "adabb1") return Controller::adabb(StepOption::I, StepOption::I);
  if (name == "adabb2") return Controller::adabb(StepOption::I, StepOption::II);
  if (name == "adabb3") return Controller::adabb(StepOption::II, StepOption::I);
  if (name == "adabb_sc") {
    double eta = 0.5, delta = 1.5;
    if (cfg.contains("sc") && cfg["sc"].is_object()) {
      eta = jget_num(cfg["sc"], "eta", eta);
      delta = jget_num(cfg["sc"], "delta", delta);
    }
    return Controller::adabb_sc(eta, delta);
  }
  if (name == "adapbb") return Controller::adapbb();
  if (name == "adgd") return Controller::baseline(K::AdGD);
  if (name == "adgd2") return Controller::baseline(K::AdGD2);
  if (name == "adapgm") return Controller::baseline(K::AdaPGM);
  if (name == "adapgm_pir") {
    Controller c = Controller::baseline(K::AdaPGM_PiR);
    if (cfg.contains("pir") && cfg["pir"].is_object()) {
      c.pi = jget_num(cfg["pir"], "pi", c.pi);
      c.r = jget_num(cfg["pir"], "r", c.r);
    }
    return c;
  }
  if (name == "fixed_gd") return Controller::fixed(1.0);
  if (name == "armijo_gd") return Controller::baseline(K::ArmijoGD);
  if (name == "bb_gll") return Controller::baseline(K::BB_GLL);
  throw Error("unknown controller: " + name);
}

std::vector<ControllerSpec> parse_controllers(const json& cfg) {
  if (!cfg.contains("controllers") || !cfg["controllers"].is_array() ||
      cfg["controllers"].empty())
    throw Error("config requires a non-empty 'controllers' array");
  std::vector<ControllerSpec> out;
  for (const auto& item : cfg["controllers"]) {
    ControllerSpec cs;
    if (item.is_string()) {
      cs.name = item.get<std::string>();
    } else if (item.is_object()) {
      cs.name = jget_str(item, "name", "");
      if (cs.name.empty()) throw Error("controller object requires 'name'");
    } else {
      throw Error("controllers entries must be names or objects");
    }
    cs.controller = controller_from_name(cs.name, cfg);
    if (cs.controller.kind == ControllerKind::FixedGD) {
      cs.fixed_mode = "one_over_L";
      if (item.is_object() && item.contains("alpha")) {
        if (item["alpha"].is_number()) {
          cs.controller.alpha = item["alpha"].get<double>();
          cs.fixed_mode = "number";
        } else if (item["alpha"].is_string()) {
          cs.fixed_mode = item["alpha"].get<std::string>();
          if (cs.fixed_mode != "one_over_L" && cs.fixed_mode != "tuned")
            throw Error("fixed_gd alpha must be a number, one_over_L, or tuned");
        } else {
          throw Error("fixed_gd alpha must be a number or string");
        }
      } else if (cfg.contains("fixed_alpha")) {
        if (cfg["fixed_alpha"].is_number()) {
          cs.controller.alpha = cfg["fixed_alpha"].get<double>();
          cs.fixed_mode = "number";
        } else {
          cs.fixed_mode = jget_str(cfg, "fixed_alpha", "one_over_L");
        }
      }
    }
    out.push_back(std::move(cs));
  }
  return out;
}

RunConfig run_config_from(const json& cfg, const ControllerSpec& cs) {
  RunConfig rc;
  rc.controller = cs.controller;
  rc.alpha_0 = jget_num(cfg, "alpha_0", 1e-10);
  rc.max_iter = static_cast<int>(jget_int(cfg, "max_iter", 1000));
  rc.grad_tol = jget_num(cfg, "grad_tol", 0.0);
  rc.theta1_reset = jget_bool(cfg, "theta1_reset", false);
  // The tiny-alpha_0 probe reset is a baseline fixup; the AdaBB family
  // absorbs a tiny seed through theta_0 and never needs it.
  const bool probe = jget_bool(cfg, "alpha0_probe_reset", false);
  const ControllerKind k = cs.controller.kind;
  rc.alpha0_probe_reset =
      probe && (k == ControllerKind::AdGD || k == ControllerKind::AdGD2 ||
                k == ControllerKind::AdaPGM || k == ControllerKind::AdaPGM_PiR);
  rc.armijo_c = jget_num(cfg, "armijo_c", 1e-4);
  rc.backtrack = jget_num(cfg, "backtrack", 0.5);
  rc.gll_window = static_cast<int>(jget_int(cfg, "gll_window", 10));
  return rc;
}

double resolve_fixed_alpha(const BuiltProblem& bp, const ControllerSpec& cs,
                           const json& cfg) {
  if (cs.fixed_mode == "number") return cs.controller.alpha;
  if (cs.fixed_mode == "one_over_L") {
    const auto L = bp.lipschitz();
    if (!L || !(*L > 0.0))
      throw Error("fixed_gd one_over_L: problem has no certified L");
    return 1.0 / *L;
  }
  if (cs.fixed_mode == "tuned") {
    if (bp.is_composite())
      throw Error("fixed_gd tuning requires a smooth problem");
    const int max_iter = static_cast<int>(jget_int(cfg, "max_iter", 1000));
    json jt = cfg.contains("tune") && cfg["tune"].is_object() ? cfg["tune"]
                                                              : json::object();
    return tune_fixed_stepsize(
        *bp.smooth, bp.x0, jget_num(jt, "grid_lo", 0.1),
        jget_num(jt, "grid_hi", 10.0),
        static_cast<int>(jget_int(jt, "grid_n", 10)),
        static_cast<int>(jget_int(jt, "probe_iters",
                                  std::max(1, max_iter / 2))));
  }
  throw Error("unknown fixed_gd alpha mode: " + cs.fixed_mode);
}

RunTrace execute(const BuiltProblem& bp, const RunConfig& rc) {
  RunTrace t;
  if (bp.is_composite())
    t = run_composite(*bp.composite, bp.x0, rc);
  else
    t = run(*bp.smooth, bp.x0, rc);
  t.problem_id = bp.id;
  for (const auto& [k, v] : bp.meta) t.meta.emplace(k, v);
  return t;
}

bool controller_supports(const BuiltProblem& bp, ControllerKind k) {
  if (bp.is_composite())
    return k == ControllerKind::AdaPBB || k == ControllerKind::AdaPGM ||
           k == ControllerKind::AdaPGM_PiR || k == ControllerKind::FixedGD;
  return k != ControllerKind::AdaPBB;
}

// ---------------------------------------------------------------- cmd_run

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, bool plot_data) {
  const json cfg = load_json(config_path);
  const std::uint64_t seed =
      seed_override.value_or(static_cast<std::uint64_t>(jget_int(cfg, "seed", 0)));
  const BuiltProblem bp = build_problem(cfg, seed);
  const auto controllers = parse_controllers(cfg);
  for (const auto& cs : controllers)
    if (!controller_supports(bp, cs.controller.kind))
      throw Error("controller '" + cs.name + "' does not apply to problem '" +
                  bp.id + "'");

  fs::create_directories(out_dir);

  std::vector<RunTrace> traces;
  std::vector<std::string> names;
  for (const auto& cs : controllers) {
    ControllerSpec eff = cs;
    if (eff.controller.kind == ControllerKind::FixedGD)
      eff.controller.alpha = resolve_fixed_alpha(bp, cs, cfg);
    RunConfig rc = run_config_from(cfg, eff);
    traces.push_back(execute(bp, rc));
    names.push_back(cs.name);
    const auto& t = traces.back();
    std::cout << bp.id << " " << cs.name << ": " << (t.states.size() - 1)
              << " iters, stop=" << stop_reason_name(t.stop_reason)
              << ", final f=" << format_g17(t.states.back().fval) << "\n";
  }

  // f_* convention: minimum final objective value across the batch.
  double f_star = std::numeric_limits<double>::infinity();
  for (const auto& t : traces)
    if (!t.states.empty() && std::isfinite(t.states.back().fval))
      f_star = std::min(f_star, t.states.back().fval);

  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const std::string base = out_dir + "/" + bp.id + "_" + names[i];
    write_trace_csv(t, base + ".csv");
    if (plot_data) write_plot_csv(t, f_star, base + "_plot.csv");

    SummaryRow r;
    r.problem = bp.id;
    r.controller = names[i];
    r.final_fval = t.states.back().fval;
    r.final_gap = r.final_fval - f_star;
    for (const auto& st : t.states)
      if (st.fval - f_star <= 1e-8) {
        r.iters_to_1e8 = st.k;
        break;
      }
    r.final_residual = t.states.back().residual;
    r.iters = static_cast<std::int64_t>(t.states.size()) - 1;
    r.grad_calls = t.grad_calls_at.back();
    r.value_calls = t.value_calls_at.back();
    r.wall_time_s = t.wall_time_s;
    r.converged = t.converged;
    r.stop_reason = stop_reason_name(t.stop_reason);
    rows.push_back(std::move(r));
  }
  write_summary_csv(rows, out_dir + "/summary.csv");
  std::cout << "wrote " << rows.size() << " trace(s) + summary.csv to "
            << out_dir << "\n";
  return 0;
}

// -------------------------------------------------------------- cmd_verify

struct CheckLine {
  std::string name;
  int status = 0;  // 0 pass, 1 fail, 2 skipped
  std::string detail;
};

CheckLine pass(const std::string& name, const std::string& detail) {
  return {name, 0, detail};
}
CheckLine fail(const std::string& name, const std::string& detail) {
  return {name, 1, detail};
}
CheckLine skipped(const std::string& name, const std::string& why) {
  return {name, 2, why};
}

bool is_family(ControllerKind k) {
  return k == ControllerKind::AdaBB || k == ControllerKind::AdaBB_SC ||
         k == ControllerKind::AdaPBB;
}

std::vector<CheckLine> verify_trace(const BuiltProblem& bp, const RunTrace& t,
                                    const ReferenceSolution& ref) {
  std::vector<CheckLine> lines;
  const ControllerKind kind = t.controller.kind;
  const int K = static_cast<int>(t.states.size()) - 1;
  const double inf = std::numeric_limits<double>::infinity();

  if (!is_family(kind)) {
    lines.push_back(skipped("ledger_identities", "no ledger theory for this controller"));
    lines.push_back(skipped("lyapunov_monotone", "no ledger theory for this controller"));
    lines.push_back(skipped("alpha_floor", "bounds proven for the general rule only"));
    lines.push_back(skipped("sum_bound", "bounds proven for the general rule only"));
    lines.push_back(skipped("category_bounds", "bounds proven for the general rule only"));
    lines.push_back(skipped("ergodic_bound", "no ledger theory for this controller"));
    lines.push_back(skipped("containment", "no ledger theory for this controller"));
    lines.push_back(skipped("sc_alpha_cap", "not a strongly convex rule"));
    return lines;
  }
  if (K < 1) {
    lines.push_back(skipped("ledger_identities", "trace has no adaptive step"));
    return lines;
  }

  std::vector<LedgerRow> rows;
  try {
    rows = compute_ledger(t);
    // Worst margins over the validated relations, for the report.
    double worst_eq = inf;
    for (int k = 1; k <= K; ++k) {
      const auto& s = t.states[k];
      const double lhs = kind == ControllerKind::AdaPBB
                             ? s.alpha_k * rows[k].E
                             : rows[k].P;
      const double rhs = kind == ControllerKind::AdaPBB
                             ? s.theta_k
                             : s.alpha_k * s.theta_k;
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      worst_eq = std::min(worst_eq, 1e-14 - std::abs(lhs - rhs) / scale);
    }
    lines.push_back(pass("ledger_identities",
                         "worst_margin=" + format_g17(worst_eq)));
  } catch (const LedgerMismatch& e) {
    lines.push_back(fail("ledger_identities", e.what()));
    return lines;  // downstream checks reuse the ledger
  }

  // Lyapunov / composite energy monotonicity.
  try {
    if (t.composite) {
      const auto seq = composite_energy_sequence(t, ref);
      double worst = inf;
      const double tol = 1e-10 * std::max(seq.V[0], 1e-300);
      for (std::size_t k = 0; k < seq.V.size(); ++k) {
        worst = std::min(worst, seq.V[k] - seq.U[k] + tol);
        if (k + 1 < seq.V.size()) worst = std::min(worst, seq.U[k] - seq.V[k + 1] + tol);
      }
      lines.push_back(worst >= 0.0
                          ? pass("lyapunov_monotone", "V/U chain worst_margin=" + format_g17(worst))
                          : fail("lyapunov_monotone", "V/U chain worst_margin=" + format_g17(worst)));
    } else {
      const auto seq = lyapunov_sequence(t, ref);
      const double tol = 1e-10 * std::max(seq.upsilon[0], 1e-300);
      double worst = inf;
      for (std::size_t k = 0; k + 1 < seq.upsilon.size(); ++k) {
        worst = std::min(worst, seq.phi[k] - seq.upsilon[k + 1] + tol);
        if (kind != ControllerKind::AdaBB_SC)  // w_0 may be negative under SC
          worst = std::min(worst, seq.upsilon[k] - seq.phi[k] + tol);
      }
      lines.push_back(worst >= 0.0
                          ? pass("lyapunov_monotone", "worst_margin=" + format_g17(worst))
                          : fail("lyapunov_monotone", "worst_margin=" + format_g17(worst)));
    }
  } catch (const Error& e) {
    lines.push_back(fail("lyapunov_monotone", e.what()));
  }

  // Stepsize lower bounds need a certified global L and the general rule.
  const auto L = bp.lipschitz();
  if (kind != ControllerKind::AdaBB) {
    lines.push_back(skipped("alpha_floor", "bounds proven for the general rule only"));
    lines.push_back(skipped("sum_bound", "bounds proven for the general rule only"));
    lines.push_back(skipped("category_bounds", "bounds proven for the general rule only"));
  } else if (!L) {
    lines.push_back(skipped("alpha_floor", "no certified L for this problem"));
    lines.push_back(skipped("sum_bound", "no certified L for this problem"));
    lines.push_back(skipped("category_bounds", "no certified L for this problem"));
  } else {
    try {
      const BoundReport rep = verify_stepsize_bounds(t, *L);
      lines.push_back(pass("alpha_floor",
                           "worst_margin=" + format_g17(rep.worst_floor_margin) +
                               " at i=" + std::to_string(rep.worst_floor_index)));
      lines.push_back(pass("sum_bound",
                           "worst_margin=" + format_g17(rep.worst_sum_margin) +
                               " at k=" + std::to_string(rep.worst_sum_index)));
      const double cat_worst = std::min(
          {rep.worst_cat2_margin, rep.worst_pre3_margin, rep.worst_triple_margin});
      lines.push_back(pass("category_bounds",
                           "worst_margin=" + format_g17(cat_worst)));
    } catch (const BoundViolation& e) {
      lines.push_back(fail("alpha_floor", e.what()));
      lines.push_back(fail("sum_bound", e.what()));
      lines.push_back(fail("category_bounds", e.what()));
    }
  }

  // Ergodic objective bound.
  if (kind == ControllerKind::AdaBB_SC) {
    lines.push_back(skipped("ergodic_bound", "ergodic rate proven for the general rule only"));
  } else {
    try {
      const auto erg = ergodic_average(t);
      double bound1;  // numerator of the rate certificate
      if (t.composite) {
        const auto seq = composite_energy_sequence(t, ref);
        bound1 = seq.U[0];
      } else {
        const auto seq = lyapunov_sequence(t, ref);
        bound1 = seq.phi[0];
      }
      double worst = inf;
      for (std::size_t k = 0; k < erg.x_bar.size(); ++k) {
        const double gap = bp.objective(erg.x_bar[k]) - ref.f_star;
        const double cap = bound1 / (2.0 * erg.S[k]);
        worst = std::min(worst, cap - gap + 1e-10 * std::max(cap, 1e-300));
      }
      lines.push_back(worst >= 0.0
                          ? pass("ergodic_bound", "worst_margin=" + format_g17(worst))
                          : fail("ergodic_bound", "worst_margin=" + format_g17(worst)));
    } catch (const Error& e) {
      lines.push_back(fail("ergodic_bound", e.what()));
    }
  }

  // Containment of all iterates.
  try {
    const double R = containment_radius(t, ref);
    double worst = inf;
    for (const auto& st : t.states) {
      const double d = (st.x - ref.x_star).norm();
      worst = std::min(worst, R - d + 1e-10 * std::max(R, 1e-300));
    }
    lines.push_back(worst >= 0.0
                        ? pass("containment", "R=" + format_g17(R) +
                                   " worst_margin=" + format_g17(worst))
                        : fail("containment", "R=" + format_g17(R) +
                                   " worst_margin=" + format_g17(worst)));
  } catch (const Error& e) {
    lines.push_back(fail("containment", e.what()));
  }

  // Strongly convex stepsize cap alpha_k <= 1/mu.
  if (kind != ControllerKind::AdaBB_SC) {
    lines.push_back(skipped("sc_alpha_cap", "not a strongly convex rule"));
  } else if (!bp.mu || !(*bp.mu > 0.0)) {
    lines.push_back(skipped("sc_alpha_cap", "no certified strong convexity"));
  } else {
    double worst = inf;
    for (int k = 1; k <= K; ++k)
      worst = std::min(worst, 1.0 / *bp.mu + 1e-12 - t.states[k].alpha_k);
    lines.push_back(worst >= 0.0
                        ? pass("sc_alpha_cap", "worst_margin=" + format_g17(worst))
                        : fail("sc_alpha_cap", "worst_margin=" + format_g17(worst)));
  }

  return lines;
}

int cmd_verify(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
  const json cfg = load_json(config_path);
  const std::uint64_t seed =
      seed_override.value_or(static_cast<std::uint64_t>(jget_int(cfg, "seed", 0)));
  const BuiltProblem bp = build_problem(cfg, seed);
  const auto controllers = parse_controllers(cfg);
  for (const auto& cs : controllers)
    if (!controller_supports(bp, cs.controller.kind))
      throw Error("controller '" + cs.name + "' does not apply to problem '" +
                  bp.id + "'");
  fs::create_directories(out_dir);

  // Reference: analytic when available, otherwise a high-accuracy run.
  ReferenceSolution ref;
  if (bp.x_star_analytic) {
    ref = analytic_reference(*bp.x_star_analytic, *bp.f_star_analytic);
  } else if (bp.is_composite()) {
    ref = high_accuracy_reference(*bp.composite, bp.x0);
  } else {
    ref = high_accuracy_reference(*bp.smooth, bp.x0);
  }

  bool any_fail = false;
  for (const auto& cs : controllers) {
    ControllerSpec eff = cs;
    if (eff.controller.kind == ControllerKind::FixedGD)
      eff.controller.alpha = resolve_fixed_alpha(bp, cs, cfg);
    RunConfig rc = run_config_from(cfg, eff);
    rc.theta1_reset = false;  // verification needs the unmodified recursion
    rc.record_diagnostics = true;
    const RunTrace t = execute(bp, rc);

    const auto lines = verify_trace(bp, t, ref);
    const std::string path = out_dir + "/verify_" + cs.name + ".txt";
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const auto& ln : lines) {
      const char* tag = ln.status == 0 ? "PASS" : ln.status == 1 ? "FAIL" : "SKIPPED";
      out << tag << " " << ln.name << " " << ln.detail << "\n";
      std::cout << cs.name << ": " << tag << " " << ln.name << " " << ln.detail
                << "\n";
      if (ln.status == 1) any_fail = true;
    }
  }
  return any_fail ? 1 : 0;
}

// ---------------------------------------------------------------- cmd_tune

int cmd_tune(const std::string& config_path, const std::string& out_dir,
             std::optional<std::uint64_t> seed_override) {
  const json cfg = load_json(config_path);
  const std::uint64_t seed =
      seed_override.value_or(static_cast<std::uint64_t>(jget_int(cfg, "seed", 0)));
  const BuiltProblem bp = build_problem(cfg, seed);
  if (bp.is_composite()) throw Error("tune requires a smooth problem");

  const int max_iter = static_cast<int>(jget_int(cfg, "max_iter", 1000));
  json jt = cfg.contains("tune") && cfg["tune"].is_object() ? cfg["tune"]
                                                            : json::object();
  const double chosen = tune_fixed_stepsize(
      *bp.smooth, bp.x0, jget_num(jt, "grid_lo", 0.1),
      jget_num(jt, "grid_hi", 10.0),
      static_cast<int>(jget_int(jt, "grid_n", 10)),
      static_cast<int>(jget_int(jt, "probe_iters", std::max(1, max_iter / 2))));

  fs::create_directories(out_dir);
  const std::string path = out_dir + "/tuned_alpha.txt";
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << format_g17(chosen) << "\n";
  std::cout << "tuned_alpha " << format_g17(chosen) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaBB benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool plot_data = false;

  auto add_common = [&](CLI::App* sub, bool with_plot) {
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
    if (with_plot)
      sub->add_flag("--plot-data", plot_data,
                    "also write <trace>_plot.csv with clipped f-gap columns");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run controllers, write traces");
  add_common(run_cmd, true);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "re-run and check theory invariants");
  add_common(verify_cmd, false);
  CLI::App* tune_cmd =
      app.add_subcommand("tune", "grid-tune a fixed stepsize");
  add_common(tune_cmd, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, seed, plot_data);
    if (verify_cmd->parsed()) return cmd_verify(config_path, out_dir, seed);
    if (tune_cmd->parsed()) return cmd_tune(config_path, out_dir, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
