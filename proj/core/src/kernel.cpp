#include "pgp/kernel.hpp"

#include <cmath>
#include <string>

namespace pgp {

void KernelParams::validate() const {
  if (dim() < 1) throw DimensionError("KernelParams: input dimension must be >= 1");
  auto check = [](double logv, const char* name) {
    const double v = std::exp(logv);
    if (!std::isfinite(v) || v <= 0.0)
      throw NumericalError(std::string("KernelParams: exp(") + name +
                           ") is not a finite positive real");
  };
  check(log_gamma, "log_gamma");
  check(log_sigma_eps, "log_sigma_eps");
  for (int d = 0; d < dim(); ++d) check(log_w[d], "log_w");
}

double kernel_eval(const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x_prime,
                   const KernelParams& params) {
  if (x.size() != params.dim() || x_prime.size() != params.dim())
    throw DimensionError("kernel_eval: point dimension does not match params");
  const Vector w = params.weights();
  const double q = (w.array() * (x - x_prime).array()).square().sum();
  const double gamma = params.gamma();
  return gamma * gamma * std::exp(-0.5 * q);
}

Matrix kernel_matrix(const Eigen::Ref<const Matrix>& A,
                     const Eigen::Ref<const Matrix>& B,
                     const KernelParams& params) {
  const int d = params.dim();
  if (A.cols() != d || B.cols() != d)
    throw DimensionError("kernel_matrix: column count does not match params");
  const Vector w = params.weights();
  const double gamma2 = params.gamma() * params.gamma();

  // Scale inputs by w, then use |a-b|^2 = |a|^2 + |b|^2 - 2 a.b.
  const Matrix As = A * w.asDiagonal();
  const Matrix Bs = B * w.asDiagonal();
  const Vector a2 = As.rowwise().squaredNorm();
  const Vector b2 = Bs.rowwise().squaredNorm();
  Matrix Q = -2.0 * (As * Bs.transpose());
  Q.colwise() += a2;
  Q.rowwise() += b2.transpose();
  // Rounding can leave small negatives for near-coincident points.
  return gamma2 * (-0.5 * Q.array().max(0.0)).exp();
}

Matrix kernel_matrix_sym(const Eigen::Ref<const Matrix>& A,
                         const KernelParams& params) {
  Matrix K = kernel_matrix(A, A, params);
  K = ((K + K.transpose()) * 0.5).eval();
  K.diagonal().setConstant(params.gamma() * params.gamma());
  return K;
}

SpdSolver::SpdSolver(const Matrix& K, double jitter_scale) {
  if (K.rows() != K.cols()) throw DimensionError("SpdSolver: matrix must be square");
  double lambda = 0.0;
  while (true) {
    Matrix A = K;
    if (lambda > 0.0) A.diagonal().array() += lambda * jitter_scale;
    llt_.compute(A);
    if (llt_.info() == Eigen::Success) {
      jitter_ = lambda * jitter_scale;
      log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
      if (std::isfinite(log_det_)) return;
    }
    if (lambda == 0.0)
      lambda = 1e-8;
    else if (lambda < 1e-4 / 2.0)
      lambda *= 10.0;
    else
      throw NumericalError("SpdSolver: factorization failed at maximum jitter",
                           lambda * jitter_scale);
  }
}

Matrix SpdSolver::half_solve(const Eigen::Ref<const Matrix>& B) const {
  return llt_.matrixL().solve(B);
}

Matrix SpdSolver::inverse() const {
  return llt_.solve(Matrix::Identity(llt_.rows(), llt_.cols()));
}

CholSolveResult chol_solve(const Matrix& K, const Eigen::Ref<const Matrix>& B,
                           double jitter_scale) {
  if (K.rows() != B.rows())
    throw DimensionError("chol_solve: row counts of K and B differ");
  SpdSolver solver(K, jitter_scale);
  return {solver.solve(B), solver.log_det(), solver.jitter()};
}

}  // namespace pgp
