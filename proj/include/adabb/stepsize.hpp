#pragma once

#include "adabb/types.hpp"

namespace adabb {

// Per-iteration output of a stepsize controller.
struct StepDecision {
  double alpha_k = 0.0;
  double theta_k = 0.0;
  CaseTag case_tag = CaseTag::CaseI;
};

// theta_0 for the AdaBB family: lambda_1^2/(2 alpha_0^2) - 1 when
// lambda_1 >= sqrt(2) alpha_0, else 0.  With this choice the Case-i update
// gives alpha_1 = lambda_1/sqrt(2) exactly.  lambda_1 = +inf (degenerate
// first secant pair) falls back to 0.
double theta0_init(double lambda_1, double alpha_0);

// General AdaBB trichotomy on (lambda_k vs alpha_prev) with independent
// Option I/II choices for Cases ii and iii.  lambda_k = +inf routes to
// Case i.  Ties: lambda = alpha_prev -> Case i, lambda = alpha_prev/2 ->
// Case iii.
StepDecision adabb_step(double lambda_k, double alpha_prev, double theta_prev,
                        StepOption opt_ii, StepOption opt_iii);

// Strongly convex variant, eta in [0,1), delta in (1,2).  Guarantees
// alpha_k <= lambda_k.
StepDecision adabb_sc_step(double lambda_k, double alpha_prev,
                           double theta_prev, double eta, double delta);

// Proximal variant: Case i as AdaBB, Case ii alpha = alpha_prev/sqrt(2),
// Case iii alpha = lambda/sqrt(2), theta = 0 in both.
StepDecision adapbb_step(double lambda_k, double alpha_prev,
                         double theta_prev);

// AdGD / AdGD2 / AdaPGM / AdaPGM_PiR one-step rules.  A zero [.]_+ bracket
// makes the affected min-term +inf so the growth term wins.  case_tag
// reports which min-term was active: CaseI for the growth term, CaseII for
// the curvature term.
StepDecision baseline_step(const Controller& c, double lambda_k, double beta_k,
                           double L_k, double alpha_prev, double theta_prev);

}  // namespace adabb
