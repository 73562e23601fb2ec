#ifndef PGP_PGP_HPP_
#define PGP_PGP_HPP_

#include "pgp/kernel.hpp"

namespace pgp {

/// The distilled model: hypothetical input locations Z with pseudo-outputs
/// u ~ N(m, S). Predictions depend only on (Z, m, S, params), never on the
/// raw data. Treated as an immutable value; distill returns a new state.
struct PgpState {
  Matrix Z;  // M x D inducing locations
  Vector m;  // M     hypothetical-output mean
  Matrix S;  // M x M hypothetical-output covariance
  KernelParams params;

  int m_inducing() const { return static_cast<int>(Z.rows()); }
  int dim() const { return static_cast<int>(Z.cols()); }
};

struct Prediction {
  Vector mean;
  Vector variance;  // pointwise, clamped at 0, excludes sigma_eps^2
};

/// A block of observations: inputs X (N x D) and normalized targets y (N).
struct MiniBatch {
  Matrix X;
  Vector y;
};

/// m = 0, S = k(Z, Z; params).
PgpState init(const Matrix& Z, const KernelParams& params);

/// Predictive mean and pointwise variance of the latent function at Xstar.
Prediction predict(const PgpState& state, const Eigen::Ref<const Matrix>& Xstar);

/// Full T x T predictive cross-covariance at Xstar.
Matrix predict_cov(const PgpState& state, const Eigen::Ref<const Matrix>& Xstar);

/// Conditions (m, S) on the mini-batch in closed form:
///   m <- m + C (B)^-1 (y - mu(X))
///   S <- S - C (B)^-1 C^T          (then symmetrized)
/// with C the model cross-covariance between Z and the batch inputs and
/// B the batch covariance plus sigma_eps^2 I. Z and params are shared with
/// the input state.
/// If prefit_residual is non-null it receives y - mu(X), the batch residual
/// under the input state (a by-product; avoids a second prediction pass when
/// tracking training error).
PgpState distill(const PgpState& state, const MiniBatch& batch,
                 Vector* prefit_residual = nullptr);

/// 1/2 m^T K_ZZ^-1 m + 1/2 log|K_ZZ| + M/2 log(2 pi).
double nlml(const PgpState& state);

/// Analytic gradient of nlml with respect to (log_gamma, log_w[0..D-1]),
/// treating m and S as constants. sigma_eps does not appear in the objective
/// and receives no gradient.
Vector nlml_grad(const PgpState& state);

}  // namespace pgp

#endif  // PGP_PGP_HPP_
