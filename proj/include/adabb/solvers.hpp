#pragma once

#include "adabb/oracle.hpp"
#include "adabb/types.hpp"

namespace adabb {

struct RunConfig {
  Controller controller;
  double alpha_0 = 1e-10;
  int max_iter = 1000;
  // Smooth runs stop when ||grad|| <= grad_tol; composite runs when the
  // prox-gradient residual ||x^{k+1}-x^k||/alpha_k <= grad_tol.  The default
  // 0 stops only at an exact stationary point (benchmark mode).
  double grad_tol = 0.0;
  // Keep x/grad/xi vectors in the trace (required by diagnostics).
  bool record_diagnostics = true;
  // Benchmark protocol: override theta_1 = 1 to stop the tiny alpha_0 from
  // inflating alpha_2.  Breaks the P_k = alpha_k theta_k identity at k = 1,
  // so invariant checks run with this off.
  bool theta1_reset = false;
  // Probe protocol for AdGD/AdaPGM on problems without a global L: take one
  // step with alpha_0, read L_1 off the secant pair, restart from x0 with
  // alpha_0 = 1/(sqrt(2) L_1).
  bool alpha0_probe_reset = false;

  // Line-search parameters (ArmijoGD / BB_GLL).
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int gll_window = 10;
};

// Gradient descent x^{k+1} = x^k - alpha_k grad f(x^k) driven by an
// adaptive controller (AdaBB family, AdGD/AdGD2/AdaPGM/AdaPGM_PiR) or
// FixedGD.  theta_0 comes from theta0_init for the AdaBB family and from
// each baseline's conventional default otherwise.
RunTrace run_smooth(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg);

// Proximal loop x^{k+1} = prox_{alpha_k g}(x^k - alpha_k grad f(x^k)) for
// AdaPBB, AdaPGM, AdaPGM_PiR, or FixedGD.  Each state k >= 1 stores the
// implicit subgradient xi^k = (x^{k-1}-x^k)/alpha_{k-1} - grad f(x^{k-1});
// state 0 stores the minimum-norm subgradient of g at x0.
RunTrace run_composite(const CompositeOracle& oracle, const Vector& x0,
                       const RunConfig& cfg);

// Backtracking line search: accept alpha when
// f(x - alpha g) <= f(x) - c alpha ||g||^2.  The trial at k = 0 is
// cfg.alpha_0; later trials start from twice the previously accepted alpha.
RunTrace run_armijo(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg);

// Long-BB trial stepsize safeguarded by a nonmonotone Armijo test against
// the max of the last gll_window function values.
RunTrace run_bb_gll(const SmoothOracle& oracle, const Vector& x0,
                    const RunConfig& cfg);

// Dispatches on cfg.controller.kind to the right driver for smooth problems.
RunTrace run(const SmoothOracle& oracle, const Vector& x0,
             const RunConfig& cfg);

// Runs FixedGD for probe_iters at each of grid_n log-spaced candidates in
// [grid_lo, grid_hi] and returns the largest one that stays viable: the run
// completes without numerical failure and ends with a finite f no worse
// than f(x0).  Throws NoViableStepsize when every candidate diverges.
double tune_fixed_stepsize(const SmoothOracle& oracle, const Vector& x0,
                           double grid_lo, double grid_hi, int grid_n,
                           int probe_iters);

}  // namespace adabb
