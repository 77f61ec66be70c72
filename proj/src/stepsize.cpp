#include "adabb/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adabb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

void check_common(const char* who, double lambda_k, double alpha_prev,
                  double theta_prev) {
  if (!(alpha_prev > 0.0))
    throw InvalidState(std::string(who) + ": alpha_prev must be positive");
  if (!(lambda_k > 0.0))
    throw InvalidState(std::string(who) + ": lambda_k must be positive");
  if (!(theta_prev >= 0.0))
    throw InvalidState(std::string(who) + ": theta_prev must be nonnegative");
}

// min of a growth term and a curvature term; ties go to the growth term.
StepDecision pick_min(double growth, double curv) {
  StepDecision d;
  if (curv < growth) {
    d.alpha_k = curv;
    d.case_tag = CaseTag::CaseII;
  } else {
    d.alpha_k = growth;
    d.case_tag = CaseTag::CaseI;
  }
  return d;
}

}  // namespace

double theta0_init(double lambda_1, double alpha_0) {
  if (!(alpha_0 > 0.0))
    throw InvalidState("theta0_init: alpha_0 must be positive");
  if (!(lambda_1 > 0.0))
    throw InvalidState("theta0_init: lambda_1 must be positive");
  if (std::isinf(lambda_1)) return 0.0;
  if (lambda_1 >= kSqrt2 * alpha_0)
    return lambda_1 * lambda_1 / (2.0 * alpha_0 * alpha_0) - 1.0;
  return 0.0;
}

StepDecision adabb_step(double lambda_k, double alpha_prev, double theta_prev,
                        StepOption opt_ii, StepOption opt_iii) {
  check_common("adabb_step", lambda_k, alpha_prev, theta_prev);

  StepDecision d;
  if (lambda_k >= alpha_prev) {
    // Case i: previous stepsize was too small relative to curvature.
    d.alpha_k = std::sqrt(1.0 + theta_prev) * alpha_prev;
    d.theta_k = d.alpha_k / alpha_prev;
    d.case_tag = CaseTag::CaseI;
  } else if (lambda_k > 0.5 * alpha_prev) {
    // Case ii: moderate overshoot.
    if (opt_ii == StepOption::I) {
      const double t1 = std::sqrt(lambda_k / (2.0 * (alpha_prev - lambda_k)));
      const double t2 = std::sqrt((1.0 + theta_prev) * lambda_k /
                                  (2.0 * lambda_k - alpha_prev));
      d.alpha_k = std::min(t1, t2) * alpha_prev;
    } else {
      d.alpha_k = lambda_k;
    }
    d.theta_k = 2.0 * d.alpha_k / alpha_prev - d.alpha_k / lambda_k;
    d.case_tag = CaseTag::CaseII;
  } else {
    // Case iii: previous stepsize was too large (lambda_k <= alpha_prev/2).
    if (opt_iii == StepOption::I) {
      d.alpha_k =
          std::sqrt(alpha_prev / (2.0 * (alpha_prev - lambda_k))) * lambda_k;
    } else {
      d.alpha_k = lambda_k / kSqrt2;
    }
    d.theta_k = d.alpha_k / alpha_prev;
    d.case_tag = CaseTag::CaseIII;
  }
  return d;
}

StepDecision adabb_sc_step(double lambda_k, double alpha_prev,
                           double theta_prev, double eta, double delta) {
  check_common("adabb_sc_step", lambda_k, alpha_prev, theta_prev);
  if (!(eta >= 0.0 && eta < 1.0))
    throw InvalidState("adabb_sc_step: eta must lie in [0,1)");
  if (!(delta > 1.0 && delta < 2.0))
    throw InvalidState("adabb_sc_step: delta must lie in (1,2)");

  StepDecision d;
  if (lambda_k >= alpha_prev) {
    d.alpha_k = std::min(std::sqrt(1.0 + eta * theta_prev) * alpha_prev,
                         lambda_k);
    d.theta_k = d.alpha_k / alpha_prev;
    d.case_tag = CaseTag::CaseI;
  } else if (lambda_k > 0.5 * delta * alpha_prev) {
    d.alpha_k = lambda_k;
    d.theta_k = 2.0 * d.alpha_k / alpha_prev - 1.0;
    d.case_tag = CaseTag::CaseII;
  } else {
    d.alpha_k = lambda_k / kSqrt2;
    d.theta_k = d.alpha_k / alpha_prev;
    d.case_tag = CaseTag::CaseIII;
  }
  return d;
}

StepDecision adapbb_step(double lambda_k, double alpha_prev,
                         double theta_prev) {
  check_common("adapbb_step", lambda_k, alpha_prev, theta_prev);

  StepDecision d;
  if (lambda_k >= alpha_prev) {
    d.alpha_k = std::sqrt(1.0 + theta_prev) * alpha_prev;
    d.theta_k = d.alpha_k / alpha_prev;
    d.case_tag = CaseTag::CaseI;
  } else if (lambda_k > 0.5 * alpha_prev) {
    d.alpha_k = alpha_prev / kSqrt2;
    d.theta_k = 0.0;
    d.case_tag = CaseTag::CaseII;
  } else {
    d.alpha_k = lambda_k / kSqrt2;
    d.theta_k = 0.0;
    d.case_tag = CaseTag::CaseIII;
  }
  return d;
}

StepDecision baseline_step(const Controller& c, double lambda_k, double beta_k,
                           double L_k, double alpha_prev, double theta_prev) {
  if (!(alpha_prev > 0.0))
    throw InvalidState("baseline_step: alpha_prev must be positive");
  if (!(theta_prev >= 0.0))
    throw InvalidState("baseline_step: theta_prev must be nonnegative");
  if (!(L_k >= 0.0))
    throw InvalidState("baseline_step: L_k must be nonnegative");

  StepDecision d;
  switch (c.kind) {
    case ControllerKind::AdGD: {
      const double growth = alpha_prev * std::sqrt(1.0 + theta_prev);
      const double curv = L_k > 0.0 ? 1.0 / (kSqrt2 * L_k) : kInf;
      d = pick_min(growth, curv);
      break;
    }
    case ControllerKind::AdGD2: {
      const double growth = std::sqrt(2.0 / 3.0 + theta_prev) * alpha_prev;
      const double bracket = 2.0 * alpha_prev * alpha_prev * L_k * L_k - 1.0;
      const double curv =
          bracket > 0.0 ? alpha_prev / std::sqrt(bracket) : kInf;
      d = pick_min(growth, curv);
      break;
    }
    case ControllerKind::AdaPGM: {
      if (!(lambda_k > 0.0) || !(beta_k > 0.0))
        throw InvalidState("baseline_step: AdaPGM needs positive lambda, beta");
      const double growth = alpha_prev * std::sqrt(1.0 + theta_prev);
      const double bracket =
          (alpha_prev / beta_k) * (alpha_prev / lambda_k - 1.0);
      const double curv =
          bracket > 0.0 ? alpha_prev / (2.0 * std::sqrt(bracket)) : kInf;
      d = pick_min(growth, curv);
      break;
    }
    case ControllerKind::AdaPGM_PiR: {
      if (!(c.pi > c.r && c.r >= 0.5))
        throw InvalidState("baseline_step: AdaPGM_PiR needs pi > r >= 1/2");
      if (!(beta_k > 0.0))
        throw InvalidState("baseline_step: AdaPGM_PiR needs positive beta");
      const double growth = std::sqrt(1.0 / c.pi + theta_prev) * alpha_prev;
      const double bracket = (1.0 - 2.0 * c.r) +
                             alpha_prev * alpha_prev * L_k * L_k +
                             2.0 * alpha_prev * (c.r - 1.0) / beta_k;
      const double curv =
          bracket > 0.0
              ? std::sqrt((1.0 - c.r / c.pi) / bracket) * alpha_prev
              : kInf;
      d = pick_min(growth, curv);
      break;
    }
    default:
      throw InvalidState("baseline_step: controller has no one-step rule");
  }
  d.theta_k = d.alpha_k / alpha_prev;
  return d;
}

std::string controller_name(const Controller& c) {
  switch (c.kind) {
    case ControllerKind::AdaBB:
      if (c.case_ii == StepOption::II && c.case_iii == StepOption::II)
        return "adabb";
      if (c.case_ii == StepOption::I && c.case_iii == StepOption::I)
        return "adabb1";
      if (c.case_ii == StepOption::I && c.case_iii == StepOption::II)
        return "adabb2";
      return "adabb3";
    case ControllerKind::AdaBB_SC: return "adabb_sc";
    case ControllerKind::AdaPBB: return "adapbb";
    case ControllerKind::AdGD: return "adgd";
    case ControllerKind::AdGD2: return "adgd2";
    case ControllerKind::AdaPGM: return "adapgm";
    case ControllerKind::AdaPGM_PiR: return "adapgm_pir";
    case ControllerKind::FixedGD: return "fixed_gd";
    case ControllerKind::ArmijoGD: return "armijo_gd";
    case ControllerKind::BB_GLL: return "bb_gll";
  }
  return "unknown";
}

}  // namespace adabb
