#include "adabb/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

#include "adabb/bb.hpp"
#include "adabb/stepsize.hpp"

namespace adabb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStallFloor = 1e-30;

bool is_adabb_family(ControllerKind k) {
  return k == ControllerKind::AdaBB || k == ControllerKind::AdaBB_SC ||
         k == ControllerKind::AdaPBB;
}

bool is_adaptive_baseline(ControllerKind k) {
  return k == ControllerKind::AdGD || k == ControllerKind::AdGD2 ||
         k == ControllerKind::AdaPGM || k == ControllerKind::AdaPGM_PiR;
}

// Conventional warm-start theta_0 for the baselines (each paper's own
// initialization).
double baseline_theta0(ControllerKind k) {
  switch (k) {
    case ControllerKind::AdGD: return 0.0;
    case ControllerKind::AdGD2: return 1.0 / 3.0;
    case ControllerKind::AdaPGM: return 1.0;
    case ControllerKind::AdaPGM_PiR: return 1.0;
    default: return 0.0;
  }
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void push_state(RunTrace& trace, IterateState st, std::int64_t grad_calls,
                std::int64_t value_calls) {
  trace.states.push_back(std::move(st));
  trace.grad_calls_at.push_back(grad_calls);
  trace.value_calls_at.push_back(value_calls);
}

void finalize(RunTrace& trace, const Timer& timer, bool record_diagnostics) {
  trace.wall_time_s = timer.seconds();
  if (!record_diagnostics && !trace.states.empty()) {
    // Keep the terminal iterate; only the history is dropped.
    for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
      trace.states[i].x.resize(0);
      trace.states[i].grad.resize(0);
      trace.states[i].xi.reset();
    }
  }
}

void check_config(const char* who, const RunConfig& cfg, const Vector& x0) {
  if (cfg.max_iter < 1)
    throw InvalidState(std::string(who) + ": max_iter must be >= 1");
  if (!(cfg.grad_tol >= 0.0))
    throw InvalidState(std::string(who) + ": grad_tol must be >= 0");
  if (!x0.allFinite())
    throw InvalidState(std::string(who) + ": x0 has non-finite entries");
  if (cfg.controller.kind == ControllerKind::FixedGD) {
    if (!(cfg.controller.alpha > 0.0))
      throw InvalidState(std::string(who) + ": FixedGD alpha must be > 0");
  } else if (!(cfg.alpha_0 > 0.0)) {
    throw InvalidState(std::string(who) + ": alpha_0 must be > 0");
  }
}

}  // namespace

RunTrace run_smooth(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg) {
  const ControllerKind kind = cfg.controller.kind;
  const bool fixed = kind == ControllerKind::FixedGD;
  if (kind == ControllerKind::AdaPBB)
    throw InvalidState("run_smooth: AdaPBB is a proximal rule; use run_composite");
  if (!fixed && !is_adabb_family(kind) && !is_adaptive_baseline(kind))
    throw InvalidState(
        "run_smooth: controller needs run_armijo/run_bb_gll driver");
  check_config("run_smooth", cfg, x0);

  if (cfg.alpha0_probe_reset && !fixed) {
    // Probe x^1 at the configured alpha_0, read off L_1, restart with
    // alpha_0 = 1/(sqrt(2) L_1).
    RunConfig eff = cfg;
    eff.alpha0_probe_reset = false;
    std::int64_t probe_grads = 0;
    Vector g0 = oracle.gradient(x0);
    ++probe_grads;
    if (g0.allFinite() && g0.norm() > cfg.grad_tol) {
      const Vector x1 = x0 - cfg.alpha_0 * g0;
      if (x1.allFinite()) {
        Vector g1 = oracle.gradient(x1);
        ++probe_grads;
        if (g1.allFinite()) {
          const auto si = secant_info(x0, x1, g0, g1);
          if (!si.degenerate && si.lips > 0.0)
            eff.alpha_0 = 1.0 / (std::sqrt(2.0) * si.lips);
        }
      }
    }
    RunTrace t = run_smooth(oracle, x0, eff);
    for (auto& c : t.grad_calls_at) c += probe_grads;
    t.meta["alpha0_probe_reset"] = "1";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", eff.alpha_0);
    t.meta["alpha_0_effective"] = buf;
    return t;
  }

  Timer timer;
  RunTrace trace;
  trace.controller = cfg.controller;
  if (cfg.theta1_reset) trace.meta["theta1_reset"] = "1";

  std::int64_t grad_calls = 0, value_calls = 0;

  Vector x = x0;
  Vector g = oracle.gradient(x);
  ++grad_calls;
  double f = oracle.value(x);
  ++value_calls;
  if (!g.allFinite() || !std::isfinite(f)) {
    trace.stop_reason = StopReason::NumericalFailure;
    finalize(trace, timer, cfg.record_diagnostics);
    return trace;
  }

  double alpha_prev = fixed ? cfg.controller.alpha : cfg.alpha_0;
  {
    IterateState st;
    st.k = 0;
    st.x = x;
    st.grad = g;
    st.fval = f;
    st.lambda_k = kNaN;
    st.alpha_k = alpha_prev;
    st.theta_k = 0.0;  // AdaBB-family theta_0 is filled in once lambda_1 is known
    st.case_tag = CaseTag::Init;
    st.residual = g.norm();
    push_state(trace, st, grad_calls, value_calls);
  }
  if (trace.states[0].residual <= cfg.grad_tol) {
    trace.converged = true;
    trace.stop_reason = StopReason::GradTol;
    finalize(trace, timer, cfg.record_diagnostics);
    return trace;
  }

  double theta_prev = 0.0;
  trace.stop_reason = StopReason::MaxIter;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    Vector x_new = x - alpha_prev * g;
    if (!x_new.allFinite()) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }
    Vector g_new = oracle.gradient(x_new);
    ++grad_calls;
    const double f_new = oracle.value(x_new);
    ++value_calls;
    if (!g_new.allFinite() || !std::isfinite(f_new)) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }

    const auto si = secant_info(x, x_new, g, g_new);
    StepDecision d;
    if (fixed) {
      d.alpha_k = cfg.controller.alpha;
      d.theta_k = 1.0;
      d.case_tag = CaseTag::CaseI;
    } else {
      if (k == 1) {
        theta_prev = is_adabb_family(kind)
                         ? theta0_init(si.lambda, cfg.alpha_0)
                         : baseline_theta0(kind);
        trace.states[0].theta_k = theta_prev;
      }
      switch (kind) {
        case ControllerKind::AdaBB:
          d = adabb_step(si.lambda, alpha_prev, theta_prev,
                         cfg.controller.case_ii, cfg.controller.case_iii);
          break;
        case ControllerKind::AdaBB_SC:
          d = adabb_sc_step(si.lambda, alpha_prev, theta_prev,
                            cfg.controller.eta, cfg.controller.delta);
          break;
        default:
          d = baseline_step(cfg.controller, si.lambda, si.beta, si.lips,
                            alpha_prev, theta_prev);
          break;
      }
      if (cfg.theta1_reset && k == 1) d.theta_k = 1.0;
    }

    IterateState st;
    st.k = k;
    st.x = x_new;
    st.grad = g_new;
    st.fval = f_new;
    st.lambda_k = si.lambda;
    st.alpha_k = d.alpha_k;
    st.theta_k = d.theta_k;
    st.case_tag = d.case_tag;
    st.residual = g_new.norm();
    push_state(trace, st, grad_calls, value_calls);

    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    alpha_prev = d.alpha_k;
    theta_prev = d.theta_k;

    if (st.residual <= cfg.grad_tol) {
      trace.converged = true;
      trace.stop_reason = StopReason::GradTol;
      break;
    }
  }

  finalize(trace, timer, cfg.record_diagnostics);
  return trace;
}

RunTrace run_composite(const CompositeOracle& co, const Vector& x0,
                       const RunConfig& cfg) {
  const ControllerKind kind = cfg.controller.kind;
  const bool fixed = kind == ControllerKind::FixedGD;
  if (kind != ControllerKind::AdaPBB && kind != ControllerKind::AdaPGM &&
      kind != ControllerKind::AdaPGM_PiR && !fixed)
    throw InvalidState("run_composite: controller has no proximal rule");
  check_config("run_composite", cfg, x0);

  const SmoothOracle& oracle = co.smooth();
  Timer timer;
  RunTrace trace;
  trace.controller = cfg.controller;
  trace.composite = true;
  if (cfg.theta1_reset) trace.meta["theta1_reset"] = "1";

  std::int64_t grad_calls = 0, value_calls = 0;

  Vector x = x0;
  Vector g = oracle.gradient(x);
  ++grad_calls;
  double F = oracle.value(x) + co.nonsmooth_value(x);
  ++value_calls;
  if (!g.allFinite() || !std::isfinite(F)) {
    trace.stop_reason = StopReason::NumericalFailure;
    finalize(trace, timer, cfg.record_diagnostics);
    return trace;
  }

  double alpha_prev = fixed ? cfg.controller.alpha : cfg.alpha_0;
  {
    IterateState st;
    st.k = 0;
    st.x = x;
    st.grad = g;
    st.fval = F;
    st.lambda_k = kNaN;
    st.alpha_k = alpha_prev;
    st.theta_k = 0.0;
    st.case_tag = CaseTag::Init;
    st.xi = co.min_norm_subgrad(x);
    st.residual = kInf;  // no prox step taken yet
    push_state(trace, st, grad_calls, value_calls);
  }

  double theta_prev = 0.0;
  trace.stop_reason = StopReason::MaxIter;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vector v = x - alpha_prev * g;
    if (!v.allFinite()) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }
    Vector x_new = co.prox(alpha_prev, v);
    if (!x_new.allFinite()) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }
    Vector g_new = oracle.gradient(x_new);
    ++grad_calls;
    const double F_new = oracle.value(x_new) + co.nonsmooth_value(x_new);
    ++value_calls;
    if (!g_new.allFinite() || !std::isfinite(F_new)) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }

    const auto si = secant_info(x, x_new, g, g_new);
    StepDecision d;
    if (fixed) {
      d.alpha_k = cfg.controller.alpha;
      d.theta_k = 1.0;
      d.case_tag = CaseTag::CaseI;
    } else {
      if (k == 1) {
        theta_prev = kind == ControllerKind::AdaPBB
                         ? theta0_init(si.lambda, cfg.alpha_0)
                         : baseline_theta0(kind);
        trace.states[0].theta_k = theta_prev;
      }
      if (kind == ControllerKind::AdaPBB)
        d = adapbb_step(si.lambda, alpha_prev, theta_prev);
      else
        d = baseline_step(cfg.controller, si.lambda, si.beta, si.lips,
                          alpha_prev, theta_prev);
      if (cfg.theta1_reset && k == 1) d.theta_k = 1.0;
    }

    IterateState st;
    st.k = k;
    st.x = x_new;
    st.grad = g_new;
    st.fval = F_new;
    st.lambda_k = si.lambda;
    st.alpha_k = d.alpha_k;
    st.theta_k = d.theta_k;
    st.case_tag = d.case_tag;
    // Implicit subgradient: x^k = x^{k-1} - alpha_{k-1}(grad f(x^{k-1}) + xi^k).
    st.xi = (x - x_new) / alpha_prev - g;
    st.residual = (x - x_new).norm() / alpha_prev;
    push_state(trace, st, grad_calls, value_calls);

    x = std::move(x_new);
    g = std::move(g_new);
    F = F_new;
    alpha_prev = d.alpha_k;
    theta_prev = d.theta_k;

    if (st.residual <= cfg.grad_tol) {
      trace.converged = true;
      trace.stop_reason = StopReason::GradTol;
      break;
    }
  }

  finalize(trace, timer, cfg.record_diagnostics);
  return trace;
}

namespace {

// Shared scaffold for the two line-search drivers.  trial_fn(k, secant,
// alpha_accepted_prev) proposes the first trial stepsize; the accepted f at
// the trial point is reused as the next iterate's value.
template <typename TrialFn, typename BoundFn>
RunTrace run_line_search(const SmoothOracle& oracle, const Vector& x0,
                         const RunConfig& cfg, TrialFn trial_fn,
                         BoundFn bound_fn) {
  check_config("line_search", cfg, x0);

  Timer timer;
  RunTrace trace;
  trace.controller = cfg.controller;

  std::int64_t grad_calls = 0, value_calls = 0;

  Vector x = x0;
  Vector g = oracle.gradient(x);
  ++grad_calls;
  double f = oracle.value(x);
  ++value_calls;
  if (!g.allFinite() || !std::isfinite(f)) {
    trace.stop_reason = StopReason::NumericalFailure;
    finalize(trace, timer, cfg.record_diagnostics);
    return trace;
  }

  std::deque<double> window{f};
  double alpha_acc = cfg.alpha_0;
  SecantInfo si;  // degenerate at k = 0
  trace.stop_reason = StopReason::MaxIter;

  for (int k = 0; k <= cfg.max_iter; ++k) {
    IterateState st;
    st.k = k;
    st.x = x;
    st.grad = g;
    st.fval = f;
    st.lambda_k = k == 0 ? kNaN : si.lambda;
    st.case_tag = k == 0 ? CaseTag::Init : CaseTag::CaseI;
    st.residual = g.norm();

    const bool at_tol = st.residual <= cfg.grad_tol;
    if (at_tol || k == cfg.max_iter) {
      // Terminal state: no search; record the previous accepted stepsize.
      st.alpha_k = alpha_acc;
      st.theta_k = k == 0 ? 0.0 : 1.0;
      push_state(trace, st, grad_calls, value_calls);
      if (at_tol) {
        trace.converged = true;
        trace.stop_reason = StopReason::GradTol;
      }
      break;
    }

    // Backtracking from the driver-specific first trial.
    const double gn2 = g.squaredNorm();
    const double bound_base = bound_fn(window);
    double a = trial_fn(k, si, alpha_acc);
    double f_next = kNaN;
    bool stalled = false;
    while (true) {
      const Vector xt = x - a * g;
      double ft = kNaN;
      if (xt.allFinite()) {
        ft = oracle.value(xt);
        ++value_calls;
      }
      if (std::isfinite(ft) && ft <= bound_base - cfg.armijo_c * a * gn2) {
        f_next = ft;
        break;
      }
      a *= cfg.backtrack;
      if (a < kStallFloor) {
        stalled = true;
        break;
      }
    }

    st.alpha_k = stalled ? alpha_acc : a;
    st.theta_k = k == 0 ? 0.0 : st.alpha_k / alpha_acc;
    push_state(trace, st, grad_calls, value_calls);
    if (stalled) {
      trace.stop_reason = StopReason::LineSearchStall;
      break;
    }

    Vector x_new = x - a * g;
    Vector g_new = oracle.gradient(x_new);
    ++grad_calls;
    if (!g_new.allFinite()) {
      trace.stop_reason = StopReason::NumericalFailure;
      break;
    }
    si = secant_info(x, x_new, g, g_new);
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_next;
    alpha_acc = a;
    window.push_back(f);
    while (static_cast<int>(window.size()) > std::max(1, cfg.gll_window))
      window.pop_front();
  }

  finalize(trace, timer, cfg.record_diagnostics);
  return trace;
}

}  // namespace

RunTrace run_armijo(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg) {
  RunConfig eff = cfg;
  eff.controller.kind = ControllerKind::ArmijoGD;
  return run_line_search(
      oracle, x0, eff,
      [&eff](int k, const SecantInfo&, double alpha_acc) {
        return k == 0 ? eff.alpha_0 : 2.0 * alpha_acc;
      },
      // Monotone Armijo: compare against the current f only.
      [](const std::deque<double>& window) { return window.back(); });
}

RunTrace run_bb_gll(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg) {
  RunConfig eff = cfg;
  eff.controller.kind = ControllerKind::BB_GLL;
  return run_line_search(
      oracle, x0, eff,
      [&eff](int k, const SecantInfo& si, double alpha_acc) {
        if (k == 0) return eff.alpha_0;
        if (si.degenerate || !std::isfinite(si.beta)) return 2.0 * alpha_acc;
        return si.beta;  // long BB trial
      },
      // Nonmonotone: max of the retained window.
      [](const std::deque<double>& window) {
        double m = window.front();
        for (double v : window) m = std::max(m, v);
        return m;
      });
}

RunTrace run(const SmoothOracle& oracle, const Vector& x0,
             const RunConfig& cfg) {
  switch (cfg.controller.kind) {
    case ControllerKind::ArmijoGD:
      return run_armijo(oracle, x0, cfg);
    case ControllerKind::BB_GLL:
      return run_bb_gll(oracle, x0, cfg);
    default:
      return run_smooth(oracle, x0, cfg);
  }
}

double tune_fixed_stepsize(const SmoothOracle& oracle, const Vector& x0,
                           double grid_lo, double grid_hi, int grid_n,
                           int probe_iters) {
  if (!(grid_lo > 0.0) || !(grid_lo <= grid_hi))
    throw InvalidState("tune_fixed_stepsize: need 0 < grid_lo <= grid_hi");
  if (grid_n < 1) throw InvalidState("tune_fixed_stepsize: grid_n must be >= 1");
  if (grid_n >= 2 && !(grid_lo < grid_hi))
    throw InvalidState("tune_fixed_stepsize: grid_lo < grid_hi for grid_n >= 2");
  if (probe_iters < 1)
    throw InvalidState("tune_fixed_stepsize: probe_iters must be >= 1");

  const double f0 = oracle.value(x0);
  double chosen = kNaN;
  for (int j = 0; j < grid_n; ++j) {
    const double t =
        grid_n == 1 ? 0.0 : static_cast<double>(j) / (grid_n - 1);
    const double a =
        std::exp(std::log(grid_lo) + t * (std::log(grid_hi) - std::log(grid_lo)));
    RunConfig cfg;
    cfg.controller = Controller::fixed(a);
    cfg.max_iter = probe_iters;
    cfg.grad_tol = 0.0;
    cfg.record_diagnostics = false;
    const RunTrace t_run = run_smooth(oracle, x0, cfg);
    if (t_run.stop_reason == StopReason::NumericalFailure) continue;
    if (t_run.states.empty()) continue;
    const double ff = t_run.states.back().fval;
    // Viable: survived the probe with a finite objective no worse than the
    // start (a stable fixed-step run is monotone; amplification shows up as
    // f blowing past f(x0) long before overflow turns it into NaN).
    if (std::isfinite(ff) && ff <= f0) chosen = a;  // ascending grid: keep last
  }
  if (std::isnan(chosen))
    throw NoViableStepsize("tune_fixed_stepsize: every candidate diverged");
  return chosen;
}

}  // namespace adabb
