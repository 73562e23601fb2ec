#include "pgp/pgp.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace pgp {

namespace {

void check_query(const PgpState& state, const Eigen::Ref<const Matrix>& Xstar) {
  if (Xstar.cols() != state.dim())
    throw DimensionError("predict: query column count does not match model");
}

double gamma2(const PgpState& state) {
  const double g = state.params.gamma();
  return g * g;
}

}  // namespace

PgpState init(const Matrix& Z, const KernelParams& params) {
  if (Z.rows() < 1) throw DimensionError("init: need at least one inducing point");
  if (Z.cols() != params.dim())
    throw DimensionError("init: Z column count does not match params");
  params.validate();

  const int M = static_cast<int>(Z.rows());
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j)
      if ((Z.row(i) - Z.row(j)).cwiseAbs().maxCoeff() == 0.0) {
        std::cerr << "pgp: warning: duplicate inducing locations at rows " << i
                  << " and " << j << " degrade conditioning\n";
        break;
      }

  PgpState state;
  state.Z = Z;
  state.m = Vector::Zero(M);
  state.S = kernel_matrix_sym(Z, params);
  state.params = params;
  return state;
}

// Both predictive forms group the Nystrom and S terms as
//   Sigma = Kxx - W^T (Kzz - S) W,  W = A^-1 Kzx,
// which cancels exactly (to the bit) when S is still the prior.
Prediction predict(const PgpState& state, const Eigen::Ref<const Matrix>& Xstar) {
  check_query(state, Xstar);
  const Matrix K = kernel_matrix_sym(state.Z, state.params);
  SpdSolver A(K, gamma2(state));
  const Matrix Kxz = kernel_matrix(Xstar, state.Z, state.params);
  const Matrix W = A.solve(Kxz.transpose());  // M x T

  Matrix D = K - state.S;
  D.diagonal().array() += A.jitter();

  Prediction out;
  out.mean = W.transpose() * state.m;
  const Vector q =
      (W.array() * (D * W).array()).colwise().sum().transpose();
  out.variance =
      (Vector::Constant(Xstar.rows(), gamma2(state)) - q).cwiseMax(0.0);
  return out;
}

Matrix predict_cov(const PgpState& state, const Eigen::Ref<const Matrix>& Xstar) {
  check_query(state, Xstar);
  const Matrix K = kernel_matrix_sym(state.Z, state.params);
  SpdSolver A(K, gamma2(state));
  const Matrix Kxz = kernel_matrix(Xstar, state.Z, state.params);
  const Matrix W = A.solve(Kxz.transpose());  // M x T

  Matrix D = K - state.S;
  D.diagonal().array() += A.jitter();

  Matrix cov = kernel_matrix_sym(Xstar, state.params) - W.transpose() * (D * W);
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return cov;
}

PgpState distill(const PgpState& state, const MiniBatch& batch,
                 Vector* prefit_residual) {
  const auto n = batch.X.rows();
  if (n < 1) throw DimensionError("distill: empty mini-batch");
  if (batch.X.cols() != state.dim())
    throw DimensionError("distill: batch column count does not match model");
  if (batch.y.size() != n)
    throw DimensionError("distill: batch target length does not match inputs");

  const double g2 = gamma2(state);
  SpdSolver A(kernel_matrix_sym(state.Z, state.params), g2);
  const double j = A.jitter();

  const Matrix Kzx = kernel_matrix(state.Z, batch.X, state.params);  // M x n
  const Matrix W = A.solve(Kzx);                                     // M x n
  const Matrix SW = state.S * W;                                     // M x n

  // Batch covariance Sigma(X, X) = Kxx - Kxz A^-1 Kzx + W^T S W.
  Matrix Sxx = kernel_matrix_sym(batch.X, state.params);
  {
    const Matrix T = A.half_solve(Kzx);  // L^-1 Kzx
    Sxx.selfadjointView<Eigen::Lower>().rankUpdate(T.transpose(), -1.0);
    Sxx = Matrix(Sxx.selfadjointView<Eigen::Lower>());
  }
  {
    const Matrix Q = W.transpose() * SW;
    Sxx += 0.5 * (Q + Q.transpose());
  }

  // Cross-covariance Sigma(Z, X). With A = Kzz + j*I and A W = Kzx:
  //   Kzz W = Kzx - j W, so the Kzx and Kzz W terms collapse.
  Matrix C = SW;
  if (j > 0.0) C += j * (W - A.solve(SW));

  const double se = state.params.sigma_eps();
  Matrix B = Sxx;
  B.diagonal().array() += se * se;
  SpdSolver Bf(B, g2);

  const Vector resid = batch.y - W.transpose() * state.m;
  if (prefit_residual) *prefit_residual = resid;

  PgpState next;
  next.Z = state.Z;
  next.params = state.params;
  next.m = state.m + C * Bf.solve(resid);
  next.S = state.S;
  {
    const Matrix P = Bf.half_solve(C.transpose());  // n x M
    next.S.selfadjointView<Eigen::Lower>().rankUpdate(P.transpose(), -1.0);
    next.S = Matrix(next.S.selfadjointView<Eigen::Lower>());
  }
  return next;
}

double nlml(const PgpState& state) {
  SpdSolver A(kernel_matrix_sym(state.Z, state.params), gamma2(state));
  const Vector alpha = A.solve(state.m);
  const double M = static_cast<double>(state.m_inducing());
  return 0.5 * state.m.dot(alpha) + 0.5 * A.log_det() +
         0.5 * M * std::log(2.0 * std::numbers::pi);
}

Vector nlml_grad(const PgpState& state) {
  const int M = state.m_inducing();
  const int D = state.dim();
  const Matrix K = kernel_matrix_sym(state.Z, state.params);
  SpdSolver A(K, gamma2(state));
  const Vector alpha = A.solve(state.m);

  Vector grad(1 + D);
  // d(K + j I)/d log_gamma = 2 (K + j I), so the trace collapses.
  grad[0] = static_cast<double>(M) - alpha.dot(state.m);

  // E = (A^-1 - alpha alpha^T) .* K; symmetric.
  Matrix E = A.inverse();
  E -= alpha * alpha.transpose();
  E.array() *= K.array();
  const Vector r = E.rowwise().sum();

  const Vector w = state.params.weights();
  for (int d = 0; d < D; ++d) {
    const Vector zd = state.Z.col(d);
    const Vector zd2 = zd.array().square();
    // -1/2 w_d^2 sum_ij E_ij (z_id - z_jd)^2
    grad[1 + d] = -w[d] * w[d] * (r.dot(zd2) - zd.dot(E * zd));
  }
  return grad;
}

}  // namespace pgp
