#pragma once

#include <cmath>
#include <limits>

#include "adabb/types.hpp"

namespace adabb {

namespace detail {
// Relative guard for <y,s> <= 0 detection.
inline constexpr double kCurvatureRelTol = 1e-14;

inline bool degenerate_curvature(double ys, double ny, double ns) {
  return ys <= kCurvatureRelTol * ny * ns;
}
}  // namespace detail

// Short BB: lambda = <y,s> / ||y||^2 with s = x_curr - x_prev,
// y = g_curr - g_prev.  Throws DegenerateStep when ||y|| = 0 or
// <y,s> <= 0 within the relative guard.
inline double short_bb(const Vector& x_prev, const Vector& x_curr,
                       const Vector& g_prev, const Vector& g_curr) {
  const Vector s = x_curr - x_prev;
  const Vector y = g_curr - g_prev;
  const double ny2 = y.squaredNorm();
  if (ny2 == 0.0) throw DegenerateStep("short_bb: identical gradients");
  const double ys = y.dot(s);
  if (detail::degenerate_curvature(ys, std::sqrt(ny2), s.norm()))
    throw DegenerateStep("short_bb: nonpositive curvature <y,s>");
  return ys / ny2;
}

// Long BB: beta = ||s||^2 / <y,s>.  Always >= short_bb on the same inputs.
inline double long_bb(const Vector& x_prev, const Vector& x_curr,
                      const Vector& g_prev, const Vector& g_curr) {
  const Vector s = x_curr - x_prev;
  const Vector y = g_curr - g_prev;
  const double ys = y.dot(s);
  if (detail::degenerate_curvature(ys, y.norm(), s.norm()))
    throw DegenerateStep("long_bb: nonpositive curvature <y,s>");
  return s.squaredNorm() / ys;
}

// Local Lipschitz estimate L_k = ||y|| / ||s||.  Sandwich:
// 1/lambda_k >= L_k >= 1/beta_k on nondegenerate steps.
inline double local_lipschitz(const Vector& x_prev, const Vector& x_curr,
                              const Vector& g_prev, const Vector& g_curr) {
  const Vector s = x_curr - x_prev;
  const double ns = s.norm();
  if (ns == 0.0) throw DegenerateStep("local_lipschitz: identical points");
  return (g_curr - g_prev).norm() / ns;
}

// Secant quantities for one step, with the degenerate case folded in:
// lambda = beta = +inf and L = 0 signal "no usable curvature", which every
// controller treats as growth (Case i / first min-term).
struct SecantInfo {
  double lambda = std::numeric_limits<double>::infinity();
  double beta = std::numeric_limits<double>::infinity();
  double lips = 0.0;
  bool degenerate = true;
};

inline SecantInfo secant_info(const Vector& x_prev, const Vector& x_curr,
                              const Vector& g_prev, const Vector& g_curr) {
  SecantInfo out;
  const Vector s = x_curr - x_prev;
  const Vector y = g_curr - g_prev;
  const double ns = s.norm();
  const double ny = y.norm();
  const double ys = y.dot(s);
  if (ns == 0.0 || ny == 0.0 || detail::degenerate_curvature(ys, ny, ns))
    return out;
  out.lambda = ys / (ny * ny);
  out.beta = ns * ns / ys;
  out.lips = ny / ns;
  out.degenerate = false;
  return out;
}

}  // namespace adabb
