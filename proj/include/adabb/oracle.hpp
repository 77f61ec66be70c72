#pragma once

#include <optional>

#include "adabb/types.hpp"

namespace adabb {

// Smooth convex objective.  lipschitz_hint, when present, is a certified
// global smoothness constant; it is consumed only by diagnostics and
// fixed-step baselines, never by adaptive controllers.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }
  virtual int dim() const = 0;
};

// Composite objective F = f + g with f smooth and g prox-friendly.
class CompositeOracle {
 public:
  virtual ~CompositeOracle() = default;
  virtual const SmoothOracle& smooth() const = 0;
  virtual double nonsmooth_value(const Vector& x) const = 0;
  // prox(alpha, v) = argmin_y g(y) + ||y - v||^2 / (2 alpha)
  virtual Vector prox(double alpha, const Vector& v) const = 0;
  // Minimum-norm element of the subdifferential of g at x (used for the
  // composite containment radius).
  virtual Vector min_norm_subgrad(const Vector& x) const = 0;
};

}  // namespace adabb
