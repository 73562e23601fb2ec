#ifndef PGP_KERNEL_HPP_
#define PGP_KERNEL_HPP_

#include <Eigen/Dense>

#include "pgp/errors.hpp"

namespace pgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Hyperparameters of the ARD squared exponential kernel plus the observation
/// noise level. All entries are stored in log-space so that exponentiation
/// always yields a positive value; gradients are taken with respect to the
/// log-parameters.
struct KernelParams {
  double log_gamma = 0.0;
  Vector log_w;  // one per input dimension
  double log_sigma_eps = 0.0;

  KernelParams() = default;
  KernelParams(double lg, Vector lw, double lse)
      : log_gamma(lg), log_w(std::move(lw)), log_sigma_eps(lse) {}

  int dim() const { return static_cast<int>(log_w.size()); }
  double gamma() const { return std::exp(log_gamma); }
  Vector weights() const { return log_w.array().exp(); }
  double sigma_eps() const { return std::exp(log_sigma_eps); }

  /// Throws if any exponentiated field is non-finite or the dimension is 0.
  void validate() const;
};

/// k(x, x') = gamma^2 exp(-1/2 sum_d w_d^2 (x_d - x'_d)^2)
double kernel_eval(const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x_prime,
                   const KernelParams& params);

/// Cross-covariance matrix with entry (i,j) = k(A_i, B_j).
Matrix kernel_matrix(const Eigen::Ref<const Matrix>& A,
                     const Eigen::Ref<const Matrix>& B,
                     const KernelParams& params);

/// Symmetric Gram matrix k(A, A); fills the lower triangle and mirrors it so
/// the result is exactly symmetric.
Matrix kernel_matrix_sym(const Eigen::Ref<const Matrix>& A,
                         const KernelParams& params);

/// Cholesky factorization of a symmetric matrix with escalating diagonal
/// jitter. The plain matrix is tried first; if the factorization fails,
/// lambda * jitter_scale * I is added with lambda stepping through
/// 1e-8, 1e-7, ..., 1e-4. A NumericalError carrying the last attempted jitter
/// is thrown when all levels fail.
class SpdSolver {
 public:
  SpdSolver(const Matrix& K, double jitter_scale);

  template <typename Derived>
  auto solve(const Eigen::MatrixBase<Derived>& b) const {
    return llt_.solve(b.derived()).eval();
  }
  /// L^-1 B, with L the lower triangular factor of K + jitter*I.
  Matrix half_solve(const Eigen::Ref<const Matrix>& B) const;
  Matrix inverse() const;

  /// log |K + jitter*I|, accumulated from the factor diagonal.
  double log_det() const { return log_det_; }
  /// Absolute jitter that was actually added to the diagonal.
  double jitter() const { return jitter_; }

  const Eigen::LLT<Matrix>& llt() const { return llt_; }

 private:
  Eigen::LLT<Matrix> llt_;
  double jitter_ = 0.0;
  double log_det_ = 0.0;
};

/// Convenience wrapper: K^-1 B plus the log-determinant by-product.
struct CholSolveResult {
  Matrix solution;
  double log_det;
  double jitter;
};
CholSolveResult chol_solve(const Matrix& K, const Eigen::Ref<const Matrix>& B,
                           double jitter_scale);

}  // namespace pgp

#endif  // PGP_KERNEL_HPP_
