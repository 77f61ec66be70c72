#pragma once

#include <vector>

#include "adabb/oracle.hpp"
#include "adabb/types.hpp"

namespace adabb {

// Per-iteration coefficients of the Lyapunov telescoping.  Smooth traces
// fill M/P, composite traces fill B/E.  w_k = alpha_k + P_k - P_{k+1}
// (smooth) or alpha_k + E_k alpha_k^2 - E_{k+1} alpha_{k+1}^2 (composite);
// the last row has no successor and carries w = 0.  category is 1/2/3 for
// I1/I2/I3 (0 on the synthetic row 0).
struct LedgerRow {
  int k = 0;
  double M = 0.0;
  double P = 0.0;
  double w = 0.0;
  double B = 0.0;
  double E = 0.0;
  int category = 0;
};

struct ReferenceSolution {
  enum class Source { Analytic, HighAccuracyRun };
  Vector x_star;
  double f_star = 0.0;
  Source source = Source::Analytic;
};

// Builds rows k = 0..K for an AdaBB / AdaBB_SC / AdaPBB trace and validates
// the ledger relations (identities to 1e-14 relative, inequalities to 1e-10
// relative), throwing LedgerMismatch on violation.  Traces recorded with
// theta1_reset carry meta["theta1_reset"]="1" and are not validated (the
// reset intentionally breaks the k=1 identity).
std::vector<LedgerRow> compute_ledger(const RunTrace& trace);

// Smooth energies, k = 1..K:
//   upsilon[k-1] = ||x^k-x*||^2 + 2 M_k ||x^k-x^{k-1}||^2
//                  + (2 alpha_{k-1} + 2 P_{k-1})(f^{k-1} - f*)
//   phi[k-1]     = upsilon[k-1] - 2 w_{k-1} (f^{k-1} - f*)
// Theory: upsilon[k] <= phi[k-1] <= upsilon[k-1] for the general rule
// (w_0 = 0); the strongly convex rule guarantees upsilon[k] <= phi[k-1]
// (w_0 may be negative there).
struct LyapunovSeq {
  std::vector<double> upsilon;
  std::vector<double> phi;
};
LyapunovSeq lyapunov_sequence(const RunTrace& trace,
                              const ReferenceSolution& ref);

// Composite energies, k = 1..K:
//   V_k = ||x^k-x*||^2 + 2 B_k alpha_k^2 ||grad f(x^{k-1}) + xi^{k-1}||^2
//         + 2 alpha_{k-1}(1 + E_{k-1} alpha_{k-1})(F^{k-1} - F*)
//   U_k = same two leading terms + 2 E_k alpha_k^2 (F^{k-1} - F*)
// Theory: V_{k+1} <= U_k <= V_k.
struct CompositeEnergySeq {
  std::vector<double> V;
  std::vector<double> U;
};
CompositeEnergySeq composite_energy_sequence(const RunTrace& trace,
                                             const ReferenceSolution& ref);

// Containment radius: R for smooth traces,
//   R^2 = ||x^0-x*||^2 + alpha_0^2 (1 + 2 M_1) ||grad f(x^0)||^2
//         + max{2 P_1 - 2 alpha_0, 0}(f^0 - f*),
// T for composite traces,
//   T^2 = ||x^0-x*||^2 + 2 alpha_0^2 ||grad f(x^0) + xi^0||^2
//         + max{2(E_1 alpha_1^2 - alpha_0), 0}(F^0 - F*).
double containment_radius(const RunTrace& trace, const ReferenceSolution& ref);

// Index partition by (lambda_k vs alpha_{k-1}): I1 lambda >= alpha_prev,
// I2 strictly between alpha_prev/2 and alpha_prev, I3 lambda <= alpha_prev/2.
// labels[i] is the label of iteration i+1.  A break index is an i in I1
// whose successor is not in I3 (the final index counts when it is in I1).
// i0 in {0,1,2} is determined by the labels of the first three iterations;
// i0_defined is false when the trace is too short for its branch.
struct Categorization {
  std::vector<int> labels;  // 1, 2, or 3
  std::vector<int> break_indices;
  int i0 = -1;
  bool i0_defined = false;
};
Categorization categorize(const RunTrace& trace);

// Stepsize lower bounds for a globally L-smooth objective, tolerance 1e-9
// relative: (1) alpha_i >= 1/(sqrt(2) L) for i >= 1; (2) partial sums
// sum_{i=1}^k alpha_i >= (k-2+sqrt(2))/L; (3) per-category bounds:
// i in I2 -> alpha_i >= 1/L; (i+1) in I3 -> alpha_i >= 2/L;
// i in I3 -> alpha_{i-1} + alpha_i + alpha_{i+1} >= (2+sqrt(2))/L.
// Throws BoundViolation naming the first failing index.  Margins are
// +infinity when no index exercises a check.
struct BoundReport {
  int checked_iters = 0;
  double worst_floor_margin = 0.0;
  int worst_floor_index = -1;
  double worst_sum_margin = 0.0;
  int worst_sum_index = -1;
  double worst_cat2_margin = 0.0;
  int worst_cat2_index = -1;
  double worst_pre3_margin = 0.0;
  int worst_pre3_index = -1;
  double worst_triple_margin = 0.0;
  int worst_triple_index = -1;
};
BoundReport verify_stepsize_bounds(const RunTrace& trace, double L);

// Ergodic averages, k = 1..K:
//   smooth:    x_bar^k = ((alpha_k + P_k) x^k + sum_{i<k} w_i x^i) / S_k,
//              S_k = P_1 + sum_{i<=k} alpha_i
//   composite: x_bar^k = (alpha_k(1 + E_k alpha_k) x^k + sum_{i<k} w_i x^i)/S_k,
//              S_k = E_1 alpha_1^2 + sum_{i<=k} alpha_i
struct ErgodicSeq {
  std::vector<Vector> x_bar;
  std::vector<double> S;
};
ErgodicSeq ergodic_average(const RunTrace& trace);

// Reference helpers.  high_accuracy_reference runs AdaBB (smooth) or AdaPGM
// (composite) to residual <= tol and throws RequiresReference if the run
// does not reach it.
ReferenceSolution analytic_reference(Vector x_star, double f_star);
ReferenceSolution high_accuracy_reference(const SmoothOracle& oracle,
                                          const Vector& x0,
                                          int max_iter = 200000,
                                          double tol = 1e-13);
ReferenceSolution high_accuracy_reference(const CompositeOracle& oracle,
                                          const Vector& x0,
                                          int max_iter = 200000,
                                          double tol = 1e-13);

}  // namespace adabb
