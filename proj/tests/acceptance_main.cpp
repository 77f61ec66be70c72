// Acceptance gate: exercises every advertised guarantee at its stated
// tolerance and prints one PASS/FAIL line per criterion.  Exits nonzero if
// any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adabb/diagnostics.hpp"
#include "adabb/problems.hpp"
#include "adabb/solvers.hpp"
#include "adabb/stepsize.hpp"

using namespace adabb;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kInf = std::numeric_limits<double>::infinity();

bool g_any_fail = false;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n" << std::flush;
  if (!pass) g_any_fail = true;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class F>
void criterion(int id, const char* name, F&& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("unexpected error: ") + e.what();
  }
  report(id, name, o.pass, o.detail);
}

QuadraticProblem make_logspace(int n, double lo, double hi) {
  Vector d(n);
  for (int i = 0; i < n; ++i)
    d[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
  return QuadraticProblem::diagonal(d, Vector::Ones(n));
}

LogisticProblem make_logistic(int m, int n, std::uint64_t seed) {
  auto base = LogisticProblem::synthetic(m, n, 0.0, seed);
  const double gamma = LogisticProblem::gamma_rule_l_over_m(base.features());
  return LogisticProblem(base.features(), base.labels(), gamma);
}

// Column-scaled logistic instance.  Isotropic Gaussian features make the
// problem locally well conditioned and a 1000-iteration run bottoms out in
// rounding noise long before it ends; geometric column scales keep the whole
// run on a numerically meaningful trajectory so 1e-9-tolerance stepsize
// bounds are actually tested.
LogisticProblem aniso_logistic(int m, int n, double lo, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(m, n);
  for (int j = 0; j < n; ++j) {
    const double s = lo * std::pow(1.0 / lo, n == 1 ? 0.0 : double(j) / (n - 1));
    for (int i = 0; i < m; ++i) A(i, j) = s * nd(rng);
  }
  Vector w(n);
  for (int j = 0; j < n; ++j) w[j] = nd(rng) / std::sqrt(double(n));
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vector y(m);
  for (int i = 0; i < m; ++i) {
    const double z = A.row(i).dot(w);
    y[i] = ud(rng) < 1.0 / (1.0 + std::exp(-z)) ? 1.0 : 0.0;
  }
  auto S = SparseMatrix::from_dense(A);
  return LogisticProblem(S, y, LogisticProblem::gamma_rule_l_over_m(S));
}

RunTrace family_run(const SmoothOracle& p, const Vector& x0, Controller c,
                    double a0, int iters, double tol = 0.0,
                    bool reset = false, bool probe = false) {
  RunConfig cfg;
  cfg.controller = c;
  cfg.alpha_0 = a0;
  cfg.max_iter = iters;
  cfg.grad_tol = tol;
  cfg.theta1_reset = reset;
  cfg.alpha0_probe_reset = probe;
  return run(p, x0, cfg);
}

// First k whose recorded objective is within gap of f_star; INT_MAX if none.
int first_k_below(const RunTrace& t, double f_star, double gap) {
  for (const auto& st : t.states)
    if (st.fval - f_star <= gap) return st.k;
  return std::numeric_limits<int>::max();
}

double lasso_objective(const LassoProblem& p, const Vector& x) {
  return p.smooth().value(x) + p.nonsmooth_value(x);
}

// Relative slack of lhs <= rhs, negative when violated beyond tol*scale.
double leq_margin(double lhs, double rhs, double tol) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return (rhs - lhs) / scale + tol;
}

// Re-derives every ledger relation from the raw trace at the stated
// tolerances and aggregates worst margins, independent of the validation
// compute_ledger performs internally.
struct LedgerAudit {
  int traces = 0;
  int rows = 0;
  double worst_eq = kInf;    // 1e-14-relative equalities
  double worst_ineq = kInf;  // 1e-10-relative inequalities
  bool ok = true;
  std::string why;
};

void audit_ledger(const RunTrace& t, LedgerAudit& a) {
  std::vector<LedgerRow> rows;
  try {
    rows = compute_ledger(t);
  } catch (const Error& e) {
    a.ok = false;
    a.why = e.what();
    return;
  }
  const auto& s = t.states;
  const int K = static_cast<int>(s.size()) - 1;
  const ControllerKind kind = t.controller.kind;
  a.traces += 1;
  a.rows += K;

  auto eq = [&](double x, double y) {
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    a.worst_eq = std::min(a.worst_eq, 1e-14 - std::abs(x - y) / scale);
  };
  auto le = [&](double lhs, double rhs) {
    a.worst_ineq = std::min(a.worst_ineq, leq_margin(lhs, rhs, 1e-10));
  };

  for (int k = 1; k <= K; ++k) {
    if (kind == ControllerKind::AdaPBB) {
      eq(s[k].alpha_k * rows[k].E, s[k].theta_k);
    } else {
      eq(rows[k].P, s[k].alpha_k * s[k].theta_k);
      le(2.0 * rows[k].M, 1.0);
    }
  }
  for (int k = 0; k < K; ++k) {
    if (kind == ControllerKind::AdaPBB) {
      le(2.0 * rows[k + 1].B * s[k + 1].alpha_k * s[k + 1].alpha_k,
         s[k].alpha_k * s[k].alpha_k);
      le(rows[k + 1].E * s[k + 1].alpha_k * s[k + 1].alpha_k,
         rows[k].E * s[k].alpha_k * s[k].alpha_k + s[k].alpha_k);
    } else if (kind == ControllerKind::AdaBB_SC) {
      le(rows[k + 1].P, s[k].alpha_k + t.controller.eta * rows[k].P);
    } else if (k >= 1) {
      le(rows[k + 1].P, rows[k].P + s[k].alpha_k);
    }
  }
  if (a.worst_eq < 0.0 || a.worst_ineq < 0.0) {
    a.ok = false;
    a.why = "re-derived relation out of tolerance";
  }
}

}  // namespace

int main() {
  std::cout << "acceptance suite\n" << std::flush;

  // ------------------------------------------------------------ suite setup
  // Ten problems for the stepsize-bound criteria.  Both families are
  // ill-conditioned on purpose so that 1000 iterations stay on a numerically
  // meaningful trajectory (see aniso_logistic).
  std::vector<QuadraticProblem> quads;
  quads.push_back(make_logspace(30, 1e-3, 10.0));
  quads.push_back(make_logspace(20, 1e-4, 1.0));
  quads.push_back(make_logspace(40, 1e-4, 3.0));
  quads.push_back(make_logspace(25, 3e-5, 1.0));
  quads.push_back(make_logspace(50, 2e-4, 2.0));
  quads.push_back(make_logspace(35, 2e-5, 0.6));
  std::vector<LogisticProblem> logs;
  logs.push_back(aniso_logistic(500, 50, 0.01, 101));
  logs.push_back(aniso_logistic(300, 30, 0.01, 102));
  logs.push_back(aniso_logistic(200, 20, 0.01, 103));
  logs.push_back(aniso_logistic(400, 40, 0.01, 104));

  // Finite-difference certification of each logistic Lipschitz constant: the
  // power-iteration bound must dominate gradient differences at random pairs.
  double worst_fd_ratio = 0.0;
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (const auto& lp : logs) {
      const double L = *lp.lipschitz_hint();
      for (int trial = 0; trial < 10; ++trial) {
        Vector x(lp.dim()), y(lp.dim());
        const double scale = trial < 5 ? 0.5 : 3.0;
        for (int i = 0; i < lp.dim(); ++i) {
          x[i] = scale * nd(rng);
          y[i] = scale * nd(rng);
        }
        const double num = (lp.gradient(x) - lp.gradient(y)).norm();
        const double den = (x - y).norm();
        if (den > 0.0) worst_fd_ratio = std::max(worst_fd_ratio, num / (den * L));
      }
    }
  }
  const bool fd_ok = worst_fd_ratio <= 1.0 + 1e-9;

  // Run the suite and verify all stepsize lower bounds.
  const auto t_suite0 = std::chrono::steady_clock::now();
  std::vector<RunTrace> suite_traces;
  std::vector<double> suite_L;
  for (const auto& q : quads) {
    suite_traces.push_back(family_run(q, Vector::Zero(q.dim()),
                                      Controller::adabb(), 1e-10, 1000));
    suite_L.push_back(*q.lipschitz_hint());
  }
  for (const auto& lp : logs) {
    suite_traces.push_back(family_run(lp, Vector::Zero(lp.dim()),
                                      Controller::adabb(), 1e-10, 1000));
    suite_L.push_back(*lp.lipschitz_hint());
  }

  bool floor_ok = true, floor_seen_fail = false;
  bool rest_ok = true;
  std::string bound_why;
  double worst_floor = kInf, worst_sum = kInf, worst_cat = kInf;
  for (std::size_t i = 0; i < suite_traces.size(); ++i) {
    const double L = suite_L[i];
    try {
      const BoundReport rep = verify_stepsize_bounds(suite_traces[i], L);
      worst_floor = std::min(worst_floor, rep.worst_floor_margin * L);
      worst_sum = std::min(worst_sum, rep.worst_sum_margin * L);
      worst_cat = std::min({worst_cat, rep.worst_cat2_margin * L,
                            rep.worst_pre3_margin * L,
                            rep.worst_triple_margin * L});
    } catch (const Error& e) {
      bound_why = std::string(e.what()) + " on problem " + std::to_string(i);
      if (std::string(e.what()).find("floor") != std::string::npos) {
        floor_ok = false;
        floor_seen_fail = true;
      } else {
        rest_ok = false;
      }
    }
  }
  const double suite_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_suite0)
          .count();
  const bool time_ok = suite_seconds < 5.0;

  report(1, "stepsize floor with certified L, 10x1000 iterations under 5s",
         floor_ok && time_ok && fd_ok,
         "worst normalized floor margin " + fmt(worst_floor) + ", " +
             fmt(suite_seconds) + "s, FD ratio " + fmt(worst_fd_ratio) +
             (floor_seen_fail ? ", " + bound_why : ""));
  report(2, "stepsize sum and per-category lower bounds",
         rest_ok && floor_ok,
         rest_ok ? "worst normalized margins: sum " + fmt(worst_sum) +
                       ", category " + fmt(worst_cat)
                 : bound_why);

  // -------------------------------------------- desk trio for energy checks
  // Small instances run at a sane alpha_0 so the initial energies (and hence
  // the 1e-10-relative tolerances derived from them) stay O(problem scale).
  QuadraticProblem desk_q = make_logspace(20, 0.1, 10.0);
  LogisticProblem desk_lg = make_logistic(200, 20, 55);
  LassoProblem lasso = LassoProblem::synthetic(100, 50, 10, 0.1, 777);

  std::optional<RunTrace> desk_qt, desk_lgt, desk_lat;
  std::optional<ReferenceSolution> desk_q_ref, desk_lg_ref, lasso_ref;
  std::string desk_err;
  try {
    desk_qt = family_run(desk_q, Vector::Zero(20), Controller::adabb(), 0.1,
                         250);
    desk_q_ref = analytic_reference(desk_q.solve(), desk_q.fstar());
    desk_lgt = family_run(desk_lg, Vector::Zero(20), Controller::adabb(), 0.1,
                          400);
    desk_lg_ref = high_accuracy_reference(desk_lg, Vector::Zero(20));
    RunConfig lcfg;
    lcfg.controller = Controller::adapbb();
    lcfg.alpha_0 = 0.1;
    lcfg.max_iter = 400;
    lcfg.grad_tol = 1e-11;
    desk_lat = run_composite(lasso, Vector::Zero(50), lcfg);
    lasso_ref = high_accuracy_reference(lasso, Vector::Zero(50));
  } catch (const std::exception& e) {
    desk_err = e.what();
  }
  auto desk_gate = [&](Outcome& o) {
    if (desk_err.empty()) return true;
    o.pass = false;
    o.detail = "fixture setup failed: " + desk_err;
    return false;
  };

  // --------------------------------------------------- criterion 3: ledgers
  criterion(3, "ledger identities and inequalities on every family trace",
            [&]() -> Outcome {
    Outcome o;
    if (!desk_gate(o)) return o;
    LedgerAudit audit;
    for (const auto& t : suite_traces) audit_ledger(t, audit);
    audit_ledger(*desk_qt, audit);
    audit_ledger(*desk_lgt, audit);
    audit_ledger(*desk_lat, audit);
    o.pass = audit.ok;
    o.detail = audit.ok
                   ? std::to_string(audit.traces) + " traces, " +
                         std::to_string(audit.rows) + " rows, worst eq margin " +
                         fmt(audit.worst_eq) + ", worst ineq margin " +
                         fmt(audit.worst_ineq)
                   : audit.why;
    return o;
  });

  // -------------------------------------------- criterion 4: energy descent
  criterion(4, "Lyapunov energies decrease on quadratic, logistic, lasso",
            [&]() -> Outcome {
    Outcome o;
    if (!desk_gate(o)) return o;
    o.pass = true;
    double worst = kInf;
    auto check_smooth = [&](const RunTrace& t, const ReferenceSolution& ref,
                            const char* who) {
      if (!o.pass) return;
      const auto seq = lyapunov_sequence(t, ref);
      const double tol = 1e-10 * seq.upsilon[0];
      for (std::size_t k = 0; k + 1 < seq.upsilon.size(); ++k) {
        worst = std::min(worst, seq.upsilon[k] - seq.upsilon[k + 1] + tol);
        if (seq.upsilon[k + 1] > seq.upsilon[k] + tol) {
          o.pass = false;
          o.detail =
              std::string(who) + " energy rose at k=" + std::to_string(k + 1);
          return;
        }
      }
    };
    check_smooth(*desk_qt, *desk_q_ref, "quadratic");
    check_smooth(*desk_lgt, *desk_lg_ref, "logistic");
    if (o.pass) {
      const auto seq = composite_energy_sequence(*desk_lat, *lasso_ref);
      const double tol = 1e-10 * seq.V[0];
      for (std::size_t k = 0; k < seq.V.size() && o.pass; ++k) {
        worst = std::min(worst, seq.V[k] - seq.U[k] + tol);
        if (seq.U[k] > seq.V[k] + tol) {
          o.pass = false;
          o.detail = "lasso U_k > V_k at k=" + std::to_string(k + 1);
        }
        if (o.pass && k + 1 < seq.V.size()) {
          worst = std::min(worst, seq.U[k] - seq.V[k + 1] + tol);
          if (seq.V[k + 1] > seq.U[k] + tol) {
            o.pass = false;
            o.detail = "lasso V_{k+1} > U_k at k=" + std::to_string(k + 1);
          }
        }
      }
    }
    if (o.pass) o.detail = "worst slack " + fmt(worst);
    return o;
  });

  // ------------------------------------------- criterion 5: ergodic bounds
  criterion(5, "ergodic objective bounds and bounded k*gap", [&]() -> Outcome {
    Outcome o;
    if (!desk_gate(o)) return o;
    o.pass = true;
    double worst_kgap = 0.0;
    auto check_erg = [&](const RunTrace& t, const ReferenceSolution& ref,
                         const SmoothOracle* smooth_obj, double L_for_witness,
                         const char* who) {
      if (!o.pass) return;
      const bool composite = smooth_obj == nullptr;
      const auto erg = ergodic_average(t);
      double numerator;
      if (composite) {
        const auto seq = composite_energy_sequence(t, ref);
        numerator = seq.U[0];
      } else {
        const auto seq = lyapunov_sequence(t, ref);
        numerator = seq.phi[0];
      }
      const double witness_cap = (composite ? 2.0 : 1.0) * numerator *
                                 L_for_witness / (2.0 * (kSqrt2 - 1.0)) *
                                 (1.0 + 1e-9);
      for (std::size_t k = 0; k < erg.x_bar.size(); ++k) {
        const double gap =
            (composite ? lasso_objective(lasso, erg.x_bar[k])
                       : smooth_obj->value(erg.x_bar[k])) -
            ref.f_star;
        const double cap = numerator / (2.0 * erg.S[k]);
        if (gap > cap + 1e-10 * std::max(cap, 1e-300)) {
          o.pass = false;
          o.detail = std::string(who) +
                     " ergodic bound fails at k=" + std::to_string(k + 1);
          return;
        }
        const double kgap = (double(k) + 1.0) * gap;
        worst_kgap = std::max(worst_kgap, kgap / witness_cap);
        if (kgap > witness_cap) {
          o.pass = false;
          o.detail = std::string(who) +
                     " k*gap witness fails at k=" + std::to_string(k + 1);
          return;
        }
      }
    };
    check_erg(*desk_qt, *desk_q_ref, &desk_q, *desk_q.lipschitz_hint(), "quad");
    check_erg(*desk_lgt, *desk_lg_ref, &desk_lg, *desk_lg.lipschitz_hint(),
              "logistic");
    check_erg(*desk_lat, *lasso_ref, nullptr, *lasso.smooth().lipschitz_hint(),
              "lasso");
    if (o.pass)
      o.detail = "max k*gap as a fraction of its cap " + fmt(worst_kgap);
    return o;
  });

  // ----------------------------------------- criterion 6: option dominance
  criterion(6, "option II never exceeds option I on random case-ii/iii inputs",
            [&]() -> Outcome {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto logu = [&](double lo, double hi) {
      return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u01(rng));
    };
    int bad = 0, n_ii = 0, n_iii = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const double lam = logu(1e-3, 1e3);
      const double theta = logu(1e-3, 1e3);
      const bool want_ii = trial % 2 == 0;
      const double ap = want_ii ? lam * (1.0 + 1e-6 + (1.0 - 2e-6) * u01(rng))
                                : lam * (2.0 + 1e-6 + 48.0 * u01(rng));
      const auto d1 = adabb_step(lam, ap, theta, StepOption::I, StepOption::I);
      const auto d2 =
          adabb_step(lam, ap, theta, StepOption::II, StepOption::II);
      if (d1.case_tag != d2.case_tag ||
          d1.case_tag != (want_ii ? CaseTag::CaseII : CaseTag::CaseIII)) {
        ++bad;
        continue;
      }
      (want_ii ? n_ii : n_iii) += 1;
      if (!(d2.alpha_k <= d1.alpha_k)) ++bad;  // exact comparison
    }
    Outcome o;
    o.pass = bad == 0;
    o.detail = std::to_string(n_ii) + " case-ii + " + std::to_string(n_iii) +
               " case-iii trials, " + std::to_string(bad) + " violations";
    return o;
  });

  // --------------------------------------------- criterion 7: containment
  criterion(7, "all iterates stay inside the containment ball",
            [&]() -> Outcome {
    Outcome o;
    if (!desk_gate(o)) return o;
    o.pass = true;
    double worst = kInf;
    auto check_cont = [&](const RunTrace& t, const ReferenceSolution& ref,
                          const char* who) {
      if (!o.pass) return;
      const double R = containment_radius(t, ref);
      for (const auto& st : t.states) {
        const double d = (st.x - ref.x_star).norm();
        worst = std::min(worst, (R - d) / std::max(R, 1e-300) + 1e-10);
        if (d > R * (1.0 + 1e-10)) {
          o.pass = false;
          o.detail = std::string(who) + " iterate " + std::to_string(st.k) +
                     " escapes the ball";
          return;
        }
      }
    };
    for (std::size_t i = 0; i < quads.size(); ++i) {
      const auto ref = analytic_reference(quads[i].solve(), quads[i].fstar());
      check_cont(suite_traces[i], ref, "suite quadratic");
    }
    check_cont(*desk_qt, *desk_q_ref, "desk quadratic");
    check_cont(*desk_lgt, *desk_lg_ref, "desk logistic");
    check_cont(*desk_lat, *lasso_ref, "desk lasso");
    if (o.pass) o.detail = "worst relative margin " + fmt(worst);
    return o;
  });

  // ------------------------------------- criterion 8: strongly convex rule
  criterion(8, "strongly convex stepsize cap and linear convergence",
            [&]() -> Outcome {
    QuadraticProblem sc_q = make_logspace(20, 0.1, 10.0);
    const RunTrace t = family_run(sc_q, Vector::Zero(20),
                                  Controller::adabb_sc(0.5, 1.5), 1e-10, 200);
    const double mu = sc_q.mu();
    bool cap_ok = true;
    double worst_cap = kInf;
    for (std::size_t k = 1; k < t.states.size(); ++k) {
      worst_cap = std::min(worst_cap, 1.0 / mu + 1e-12 - t.states[k].alpha_k);
      if (t.states[k].alpha_k > 1.0 / mu + 1e-12) cap_ok = false;
    }
    // Least-squares slope of log distance over iterations 10..200.
    const Vector xs = sc_q.solve();
    double slope = 0.0;
    bool slope_ok = false;
    if (t.states.size() >= 201) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (int k = 10; k <= 200; ++k) {
        const double dist = std::max((t.states[k].x - xs).norm(), 1e-300);
        const double yv = std::log(dist);
        sx += k;
        sy += yv;
        sxx += double(k) * k;
        sxy += k * yv;
        ++n;
      }
      slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      slope_ok = slope < 0.0;
    }
    Outcome o;
    o.pass = cap_ok && slope_ok;
    o.detail = "worst cap margin " + fmt(worst_cap) + ", log-distance slope " +
               fmt(slope);
    return o;
  });

  // ------------------------------------ criterion 9: composite convergence
  criterion(9, "proximal variant solves the lasso to 1e-8", [&]() -> Outcome {
    Outcome o;
    if (!desk_gate(o)) return o;
    RunConfig cfg;
    cfg.controller = Controller::adapbb();
    cfg.alpha_0 = 1e-10;
    cfg.max_iter = 2000;
    cfg.grad_tol = 1e-8;
    const RunTrace t = run_composite(lasso, Vector::Zero(50), cfg);
    const bool reached = t.converged && t.states.back().residual <= 1e-8;
    const double fgap = std::abs(t.states.back().fval - lasso_ref->f_star);
    o.pass = reached && fgap <= 1e-8;
    o.detail = "residual " + fmt(t.states.back().residual) + " after " +
               std::to_string(t.states.size() - 1) + " iters, |F-F*| " +
               fmt(fgap);
    return o;
  });

  // --------------------------------- criterion 10: benchmark protocol shape
  criterion(10, "benchmark protocol: faster than fixed 1/L, cubic solvable",
            [&]() -> Outcome {
    LogisticProblem bench = make_logistic(500, 50, 2026);
    const auto ref = high_accuracy_reference(bench, Vector::Zero(50));
    const RunTrace ta =
        family_run(bench, Vector::Zero(50), Controller::adabb(), 1e-10, 20000,
                   /*tol=*/0.0, /*reset=*/true);
    const double L = *bench.lipschitz_hint();
    const RunTrace tf = family_run(bench, Vector::Zero(50),
                                   Controller::fixed(1.0 / L), 1.0 / L, 20000);
    const int ka = first_k_below(ta, ref.f_star, 1e-10);
    const int kf = first_k_below(tf, ref.f_star, 1e-10);
    const bool faster = ka < kf;

    auto cubic = build_cubic_from_logistic(bench, Vector::Zero(50), 10.0);
    bool cubic_ok = true;
    std::string cubic_why;
    struct Entry {
      Controller c;
      bool probe;
      const char* name;
    };
    const Entry entries[] = {
        {Controller::adabb(), false, "adabb"},
        {Controller::adabb(StepOption::II, StepOption::I), false, "adabb3"},
        {Controller::baseline(ControllerKind::AdGD), true, "adgd"},
        {Controller::baseline(ControllerKind::AdaPGM), true, "adapgm"},
    };
    for (const auto& e : entries) {
      const bool reset = e.c.kind == ControllerKind::AdaBB;
      const RunTrace t = family_run(cubic, Vector::Zero(50), e.c, 1e-10, 20000,
                                    1e-8, reset, e.probe);
      if (!t.converged || t.stop_reason != StopReason::GradTol) {
        cubic_ok = false;
        cubic_why += std::string(e.name) +
                     " stop=" + stop_reason_name(t.stop_reason) + " ";
      }
    }
    Outcome o;
    o.pass = faster && cubic_ok;
    o.detail = "iters to 1e-10 gap: " + std::to_string(ka) + " vs " +
               std::to_string(kf) +
               (cubic_ok ? "; cubic converged under all four controllers"
                         : "; " + cubic_why);
    return o;
  });

  // --------------------------------------- criterion 11: case-i exactness
  criterion(11, "first adaptive step lands on lambda_1/sqrt(2) exactly",
            [&]() -> Outcome {
    QuadraticProblem idq(Matrix::Identity(2, 2), Vector::Zero(2));
    Vector x0(2);
    x0 << 1.0, 0.0;
    const RunTrace t = family_run(idq, x0, Controller::adabb(), 1e-10, 3);
    Outcome o;
    o.pass = t.states.size() >= 2;
    double err = kInf;
    if (o.pass) {
      const double lam1 = t.states[1].lambda_k;
      const double a1 = t.states[1].alpha_k;
      err = std::abs(a1 - lam1 / kSqrt2);
      o.pass = lam1 == 1.0 && err <= 1e-15 * lam1 &&
               std::abs(a1 - 1.0 / kSqrt2) <= 1e-15;
    }
    o.detail = "deviation " + fmt(err);
    return o;
  });

  std::cout << (g_any_fail ? "acceptance: FAIL\n" : "acceptance: PASS\n")
            << std::flush;
  return g_any_fail ? 1 : 0;
}
