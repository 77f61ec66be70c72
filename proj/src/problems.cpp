#include "adabb/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace adabb {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticProblem
// ---------------------------------------------------------------------------

QuadraticProblem::QuadraticProblem(Matrix A, Vector b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size())
    throw InvalidState("QuadraticProblem: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A_, Eigen::EigenvaluesOnly);
  lmax_ = es.eigenvalues().maxCoeff();
  lmin_ = es.eigenvalues().minCoeff();
}

QuadraticProblem QuadraticProblem::diagonal(const Vector& d, const Vector& b) {
  return QuadraticProblem(Matrix(d.asDiagonal()), b);
}

QuadraticProblem QuadraticProblem::identity(int n) {
  return QuadraticProblem(Matrix::Identity(n, n), Vector::Zero(n));
}

double QuadraticProblem::value(const Vector& x) const {
  return 0.5 * x.dot(A_ * x) - b_.dot(x);
}

Vector QuadraticProblem::gradient(const Vector& x) const {
  return A_ * x - b_;
}

Vector QuadraticProblem::solve() const {
  if (!(lmin_ > 0.0))
    throw InvalidState("QuadraticProblem::solve: A is singular");
  return A_.ldlt().solve(b_);
}

double QuadraticProblem::fstar() const { return value(solve()); }

// ---------------------------------------------------------------------------
// LogisticProblem
// ---------------------------------------------------------------------------

LogisticProblem::LogisticProblem(SparseMatrix A, Vector y, double gamma)
    : A_(std::move(A)), y_(std::move(y)), gamma_(gamma) {
  if (A_.rows != y_.size())
    throw InvalidState("LogisticProblem: label count != row count");
  if (gamma_ < 0.0) throw InvalidState("LogisticProblem: gamma < 0");
  const auto gram = [this](const Vector& v) {
    return A_.multiply_transpose(A_.multiply(v));
  };
  if (A_.rows == 0) {  // regularizer-only objective
    lips_ = gamma_;
    lips_unnormalized_ = gamma_;
    return;
  }
  const auto pw = power_iteration(gram, A_.cols);
  const double m = static_cast<double>(A_.rows);
  lips_ = pw.lambda_max / (4.0 * m) + gamma_;
  lips_unnormalized_ = pw.lambda_max / 4.0 + gamma_;
}

double LogisticProblem::gamma_rule_l_over_m(const SparseMatrix& A) {
  const auto gram = [&A](const Vector& v) {
    return A.multiply_transpose(A.multiply(v));
  };
  const auto pw = power_iteration(gram, A.cols);
  const double m = static_cast<double>(A.rows);
  return pw.lambda_max / (4.0 * m) / m;
}

LogisticProblem LogisticProblem::synthetic(int m, int n, double gamma,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  Vector w(n);
  for (int j = 0; j < n; ++j) w[j] = nd(rng) / std::sqrt(double(n));
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vector y(m);
  for (int i = 0; i < m; ++i)
    y[i] = ud(rng) < sigmoid(A.row(i).dot(w)) ? 1.0 : 0.0;
  return LogisticProblem(SparseMatrix::from_dense(A), y, gamma);
}

double LogisticProblem::value(const Vector& x) const {
  if (A_.rows == 0) return 0.5 * gamma_ * x.squaredNorm();
  const Vector z = A_.multiply(x);
  double acc = 0.0;
  for (int i = 0; i < A_.rows; ++i)
    acc += softplus(-z[i]) + (1.0 - y_[i]) * z[i];
  const double m = static_cast<double>(A_.rows);
  return acc / m + 0.5 * gamma_ * x.squaredNorm();
}

Vector LogisticProblem::gradient(const Vector& x) const {
  if (A_.rows == 0) return gamma_ * x;
  const Vector z = A_.multiply(x);
  Vector u(A_.rows);
  for (int i = 0; i < A_.rows; ++i) u[i] = sigmoid(z[i]) - y_[i];
  const double m = static_cast<double>(A_.rows);
  return A_.multiply_transpose(u) / m + gamma_ * x;
}

Matrix LogisticProblem::hessian(const Vector& x) const {
  if (A_.rows == 0)
    return gamma_ * Matrix::Identity(A_.cols, A_.cols);
  const Vector z = A_.multiply(x);
  Matrix H = Matrix::Zero(A_.cols, A_.cols);
  for (int i = 0; i < A_.rows; ++i) {
    const double s = sigmoid(z[i]);
    const double w = s * (1.0 - s);
    for (std::int64_t p = A_.offsets[i]; p < A_.offsets[i + 1]; ++p)
      for (std::int64_t q = A_.offsets[i]; q < A_.offsets[i + 1]; ++q)
        H(A_.col_idx[p], A_.col_idx[q]) += w * A_.values[p] * A_.values[q];
  }
  const double m = static_cast<double>(A_.rows);
  H /= m;
  H += gamma_ * Matrix::Identity(A_.cols, A_.cols);
  return H;
}

// ---------------------------------------------------------------------------
// CubicSubproblem
// ---------------------------------------------------------------------------

CubicSubproblem::CubicSubproblem(Vector g, Matrix H, double M)
    : g_(std::move(g)), H_(std::move(H)), M_(M) {
  if (H_.rows() != H_.cols() || H_.rows() != g_.size())
    throw InvalidState("CubicSubproblem: shape mismatch");
  if (!(M_ > 0.0)) throw InvalidState("CubicSubproblem: M must be positive");
}

double CubicSubproblem::value(const Vector& x) const {
  const double nx = x.norm();
  return g_.dot(x) + 0.5 * x.dot(H_ * x) + M_ / 6.0 * nx * nx * nx;
}

Vector CubicSubproblem::gradient(const Vector& x) const {
  return cubic_gradient(g_, H_, M_, x);
}

Vector cubic_gradient(const Vector& g, const Matrix& H, double M,
                      const Vector& x) {
  return g + H * x + (M * x.norm() / 2.0) * x;
}

CubicSubproblem build_cubic_from_logistic(const LogisticProblem& logistic,
                                          const Vector& x_ref, double M) {
  return CubicSubproblem(logistic.gradient(x_ref), logistic.hessian(x_ref), M);
}

// ---------------------------------------------------------------------------
// LassoProblem
// ---------------------------------------------------------------------------

namespace {

class LeastSquaresOracle final : public SmoothOracle {
 public:
  LeastSquaresOracle(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A_.transpose() * A_,
                                             Eigen::EigenvaluesOnly);
    lmax_ = es.eigenvalues().maxCoeff();
  }
  double value(const Vector& x) const override {
    return 0.5 * (A_ * x - b_).squaredNorm();
  }
  Vector gradient(const Vector& x) const override {
    return A_.transpose() * (A_ * x - b_);
  }
  std::optional<double> lipschitz_hint() const override { return lmax_; }
  int dim() const override { return static_cast<int>(A_.cols()); }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }

 private:
  Matrix A_;
  Vector b_;
  double lmax_ = 0.0;
};

}  // namespace

LassoProblem::LassoProblem(Matrix A, Vector b, double tau) : tau_(tau) {
  if (A.rows() != b.size()) throw InvalidState("LassoProblem: shape mismatch");
  if (!(tau_ > 0.0)) throw InvalidState("LassoProblem: tau must be positive");
  smooth_ = std::make_shared<LeastSquaresOracle>(std::move(A), std::move(b));
}

LassoProblem LassoProblem::synthetic(int m, int n, int nnz, double tau_scale,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng) / std::sqrt(double(m));
  Vector xs = Vector::Zero(n);
  for (int t = 0; t < nnz && t < n; ++t) {
    // spread the planted support deterministically
    const int j = (t * 7919) % n;
    xs[j] = nd(rng) + (nd(rng) >= 0 ? 1.0 : -1.0);
  }
  Vector noise(m);
  for (int i = 0; i < m; ++i) noise[i] = 0.01 * nd(rng);
  Vector b = A * xs + noise;
  const double tau = tau_scale * (A.transpose() * b).cwiseAbs().maxCoeff();
  return LassoProblem(std::move(A), std::move(b), tau);
}

double LassoProblem::nonsmooth_value(const Vector& x) const {
  return tau_ * x.lpNorm<1>();
}

Vector LassoProblem::prox(double alpha, const Vector& v) const {
  const double t = alpha * tau_;
  Vector out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > t)
      out[i] = v[i] - t;
    else if (v[i] < -t)
      out[i] = v[i] + t;
    else
      out[i] = 0.0;
  }
  return out;
}

Vector LassoProblem::min_norm_subgrad(const Vector& x) const {
  Vector out = Vector::Zero(x.size());
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0)
      out[i] = tau_;
    else if (x[i] < 0.0)
      out[i] = -tau_;
  }
  return out;
}

const Matrix& LassoProblem::A() const {
  return static_cast<const LeastSquaresOracle&>(*smooth_).A();
}

const Vector& LassoProblem::b() const {
  return static_cast<const LeastSquaresOracle&>(*smooth_).b();
}

// ---------------------------------------------------------------------------
// power_iteration
// ---------------------------------------------------------------------------

PowerIterResult power_iteration(
    const std::function<Vector(const Vector&)>& apply, int n, double tol,
    int max_iter) {
  PowerIterResult res;
  if (n <= 0) throw InvalidState("power_iteration: dimension must be >= 1");
  std::mt19937 rng(0xADAB);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  v.normalize();
  double rho = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector av = apply(v);
    rho = v.dot(av);
    res.iters = it;
    const double resid = (av - rho * v).norm();
    if (rho <= 0.0) {
      // PSD operator with the iterate in its kernel: 0 is the best estimate
      // unless a restart direction escapes; perturb deterministically.
      if (resid <= tol) {
        res.lambda_max = std::max(rho, 0.0);
        res.converged = true;
        return res;
      }
      for (int i = 0; i < n; ++i) v[i] += 1e-3 * nd(rng);
      v.normalize();
      continue;
    }
    if (resid <= tol * rho) {
      res.lambda_max = rho;
      res.converged = true;
      return res;
    }
    const double na = av.norm();
    if (na == 0.0) {
      res.lambda_max = 0.0;
      res.converged = true;
      return res;
    }
    v = av / na;
  }
  res.lambda_max = std::max(rho, 0.0);
  res.converged = false;
  return res;
}

}  // namespace adabb
