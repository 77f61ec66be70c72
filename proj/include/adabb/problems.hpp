#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "adabb/dataio.hpp"
#include "adabb/oracle.hpp"

namespace adabb {

// f(x) = 0.5 x^T A x - b^T x with A symmetric PSD.  Extreme eigenvalues are
// computed once at construction (desk-scale dense solve).
class QuadraticProblem final : public SmoothOracle {
 public:
  QuadraticProblem(Matrix A, Vector b);
  static QuadraticProblem diagonal(const Vector& d, const Vector& b);
  static QuadraticProblem identity(int n);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<double> lipschitz_hint() const override { return lmax_; }
  int dim() const override { return static_cast<int>(b_.size()); }

  double mu() const { return lmin_; }  // smallest eigenvalue of A
  // Minimizer A x = b; requires mu > 0.
  Vector solve() const;
  double fstar() const;
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
  double lmax_ = 0.0;
  double lmin_ = 0.0;
};

// Regularized logistic loss with the 1/m normalization:
//   f(x) = (1/m) sum_i [softplus(-z_i) + (1 - y_i) z_i] + (gamma/2)||x||^2,
// z_i = a_i^T x.  lipschitz_hint is the constant consistent with this f:
// lambda_max(A^T A)/(4m) + gamma.
class LogisticProblem final : public SmoothOracle {
 public:
  LogisticProblem(SparseMatrix A, Vector y, double gamma);
  // Standard-normal rows, labels drawn from a planted parameter.
  static LogisticProblem synthetic(int m, int n, double gamma,
                                   std::uint64_t seed);
  // gamma = L0/m with L0 = lambda_max(A^T A)/(4m), the smooth-part constant.
  static double gamma_rule_l_over_m(const SparseMatrix& A);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  std::optional<double> lipschitz_hint() const override { return lips_; }
  int dim() const override { return A_.cols; }

  // lambda_max(A^T A)/4 + gamma: the constant without the 1/m factor.
  double lipschitz_unnormalized() const { return lips_unnormalized_; }
  Matrix hessian(const Vector& x) const;
  const SparseMatrix& features() const { return A_; }
  const Vector& labels() const { return y_; }
  double gamma() const { return gamma_; }

 private:
  SparseMatrix A_;
  Vector y_;
  double gamma_ = 0.0;
  double lips_ = 0.0;
  double lips_unnormalized_ = 0.0;
};

// f(x) = g^T x + 0.5 x^T H x + (M/6)||x||^3.  Locally smooth only: no
// global Lipschitz hint.
class CubicSubproblem final : public SmoothOracle {
 public:
  CubicSubproblem(Vector g, Matrix H, double M);

  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  int dim() const override { return static_cast<int>(g_.size()); }

  const Vector& g() const { return g_; }
  const Matrix& H() const { return H_; }
  double M() const { return M_; }

 private:
  Vector g_;
  Matrix H_;
  double M_ = 0.0;
};

Vector cubic_gradient(const Vector& g, const Matrix& H, double M,
                      const Vector& x);

// g = grad of the logistic objective at x_ref, H = its Hessian there.
CubicSubproblem build_cubic_from_logistic(const LogisticProblem& logistic,
                                          const Vector& x_ref, double M);

// min 0.5||Ax - b||^2 + tau ||x||_1
class LassoProblem final : public CompositeOracle {
 public:
  LassoProblem(Matrix A, Vector b, double tau);
  // Planted sparse solution with `nnz` nonzeros; tau = tau_scale*||A^T b||_inf.
  static LassoProblem synthetic(int m, int n, int nnz, double tau_scale,
                                std::uint64_t seed);

  const SmoothOracle& smooth() const override { return *smooth_; }
  double nonsmooth_value(const Vector& x) const override;
  Vector prox(double alpha, const Vector& v) const override;
  Vector min_norm_subgrad(const Vector& x) const override;

  double tau() const { return tau_; }
  const Matrix& A() const;
  const Vector& b() const;

 private:
  std::shared_ptr<SmoothOracle> smooth_;
  double tau_ = 0.0;
};

struct PowerIterResult {
  double lambda_max = 0.0;
  bool converged = false;
  int iters = 0;
};

// Largest eigenvalue of a symmetric PSD operator given as apply: x -> Ax.
// Stops when the Rayleigh-quotient residual ||Av - rho v|| <= tol * rho.
// On non-convergence returns the best estimate with converged = false.
PowerIterResult power_iteration(const std::function<Vector(const Vector&)>& apply,
                                int n, double tol = 1e-10,
                                int max_iter = 5000);

}  // namespace adabb
