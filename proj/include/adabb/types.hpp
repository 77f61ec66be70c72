#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adabb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy.  Everything derives from Error so callers can catch the
// library as a whole or individual conditions.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Secant pair carries no usable curvature (y = 0 or <y,s> <= 0).
struct DegenerateStep : Error {
  using Error::Error;
};

// A controller was handed inputs outside its admissible range.
struct InvalidState : Error {
  using Error::Error;
};

// A ledger inequality failed beyond tolerance; indicates an implementation bug.
struct LedgerMismatch : Error {
  using Error::Error;
};

// A stepsize lower bound failed; indicates a bug or a wrong Lipschitz constant.
struct BoundViolation : Error {
  using Error::Error;
};

// A diagnostic needing x*/f* was invoked without a reference solution.
struct RequiresReference : Error {
  using Error::Error;
};

// Every candidate stepsize in a tuning grid diverged.
struct NoViableStepsize : Error {
  using Error::Error;
};

// Backtracking reduced the trial stepsize below the underflow floor.
struct LineSearchStall : Error {
  using Error::Error;
};

// Malformed input data; message carries the offending line number.
struct ParseError : Error {
  using Error::Error;
};

// Dataset labels do not form a two-class problem.
struct LabelError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Controllers.
// ---------------------------------------------------------------------------

enum class ControllerKind {
  AdaBB,       // options selectable per case, see Controller
  AdaBB_SC,    // strongly convex variant (eta, delta)
  AdaPBB,      // proximal variant
  AdGD,
  AdGD2,
  AdaPGM,
  AdaPGM_PiR,  // (pi, r) family, pi > r >= 1/2
  FixedGD,
  ArmijoGD,
  BB_GLL,
};

enum class StepOption : std::uint8_t { I, II };

// Stepsize controller selection plus its parameters.  Only the fields
// relevant to `kind` are read; the rest keep their defaults.
struct Controller {
  ControllerKind kind = ControllerKind::AdaBB;

  // AdaBB: option choice for Case ii and Case iii independently.
  // (II, II) = AdaBB, (I, I) = AdaBB1, (I, II) = AdaBB2, (II, I) = AdaBB3.
  StepOption case_ii = StepOption::II;
  StepOption case_iii = StepOption::II;

  // AdaBB_SC parameters: eta in [0,1), delta in (1,2).
  double eta = 0.5;
  double delta = 1.5;

  // AdaPGM_PiR parameters: pi > r >= 1/2.
  double pi = 1.0;
  double r = 0.5;

  // FixedGD stepsize.
  double alpha = 1.0;

  static Controller adabb(StepOption ii = StepOption::II,
                          StepOption iii = StepOption::II) {
    Controller c;
    c.kind = ControllerKind::AdaBB;
    c.case_ii = ii;
    c.case_iii = iii;
    return c;
  }
  static Controller adabb_sc(double eta = 0.5, double delta = 1.5) {
    Controller c;
    c.kind = ControllerKind::AdaBB_SC;
    c.eta = eta;
    c.delta = delta;
    return c;
  }
  static Controller adapbb() {
    Controller c;
    c.kind = ControllerKind::AdaPBB;
    return c;
  }
  static Controller baseline(ControllerKind k) {
    Controller c;
    c.kind = k;
    return c;
  }
  static Controller fixed(double alpha) {
    Controller c;
    c.kind = ControllerKind::FixedGD;
    c.alpha = alpha;
    return c;
  }
};

std::string controller_name(const Controller& c);

// ---------------------------------------------------------------------------
// Iterate/trace data model.
// ---------------------------------------------------------------------------

enum class CaseTag : std::uint8_t { Init, CaseI, CaseII, CaseIII };

inline const char* case_tag_name(CaseTag t) {
  switch (t) {
    case CaseTag::Init: return "init";
    case CaseTag::CaseI: return "i";
    case CaseTag::CaseII: return "ii";
    case CaseTag::CaseIII: return "iii";
  }
  return "?";
}

enum class StopReason : std::uint8_t {
  MaxIter,
  GradTol,
  NumericalFailure,
  LineSearchStall,
};

inline const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::MaxIter: return "max_iter";
    case StopReason::GradTol: return "grad_tol";
    case StopReason::NumericalFailure: return "numerical_failure";
    case StopReason::LineSearchStall: return "line_search_stall";
  }
  return "?";
}

// One solver step.  lambda_k is NaN at k = 0 (no secant pair yet) and +inf on
// degenerate steps.  For composite runs grad_norm_proxy stores the
// prox-gradient residual ||x^{k+1}-x^k||/alpha_k in place of ||grad||.
struct IterateState {
  int k = 0;
  Vector x;
  Vector grad;
  double fval = 0.0;
  double lambda_k = std::numeric_limits<double>::quiet_NaN();
  double alpha_k = 0.0;
  double theta_k = 0.0;
  CaseTag case_tag = CaseTag::Init;
  std::optional<Vector> xi;  // composite runs: implicit subgradient of g

  // Residual used for stopping: ||grad|| for smooth runs, prox-gradient
  // residual for composite.  Kept explicit so traces are self-describing.
  double residual = 0.0;
};

struct RunTrace {
  std::vector<IterateState> states;
  Controller controller;
  std::string problem_id;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIter;

  // Cumulative oracle call counters indexed like states: calls_at[k] is the
  // number of (gradient, value) oracle invocations consumed up to state k.
  // Matrix-vector-multiplication proxy for line-search comparisons.
  std::vector<std::int64_t> grad_calls_at;
  std::vector<std::int64_t> value_calls_at;

  double wall_time_s = 0.0;
  bool composite = false;

  // Free-form run metadata (constants used, protocol notes).
  std::map<std::string, std::string> meta;
};

}  // namespace adabb
