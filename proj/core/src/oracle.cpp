#include "pgp/oracle.hpp"

namespace pgp::oracle {

ExactPosterior exact_posterior_at(const Eigen::Ref<const Matrix>& Xq,
                                  const Eigen::Ref<const Matrix>& X,
                                  const Eigen::Ref<const Vector>& y,
                                  const KernelParams& params, long cap) {
  if (X.rows() < 1) throw DimensionError("exact_posterior_at: empty training set");
  if (X.rows() > cap)
    throw ConfigError("exact_posterior_at: N exceeds the O(N^3) cap");
  if (y.size() != X.rows())
    throw DimensionError("exact_posterior_at: X and y row counts differ");
  if (Xq.cols() != X.cols())
    throw DimensionError("exact_posterior_at: query column count mismatch");

  const double g = params.gamma();
  const double se = params.sigma_eps();
  Matrix A = kernel_matrix_sym(X, params);
  A.diagonal().array() += se * se;
  SpdSolver solver(A, g * g);

  const Matrix Kqx = kernel_matrix(Xq, X, params);
  const Matrix V = solver.solve(Kqx.transpose());  // N x Q

  ExactPosterior out;
  out.mean = Kqx * solver.solve(y);
  out.cov = kernel_matrix_sym(Xq, params) - Kqx * V;
  out.cov = ((out.cov + out.cov.transpose()) * 0.5).eval();
  return out;
}

}  // namespace pgp::oracle
