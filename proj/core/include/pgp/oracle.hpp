#ifndef PGP_ORACLE_HPP_
#define PGP_ORACLE_HPP_

#include "pgp/kernel.hpp"

namespace pgp::oracle {

/// Exact full-GP posterior at query points:
///   mean = K_qX (K_XX + sigma_eps^2 I)^-1 y
///   cov  = K_qq - K_qX (K_XX + sigma_eps^2 I)^-1 K_Xq
/// O(N^3) ground truth for tests; depends only on the kernel module, never
/// on the PGP update code.
struct ExactPosterior {
  Vector mean;
  Matrix cov;
};

ExactPosterior exact_posterior_at(const Eigen::Ref<const Matrix>& Xq,
                                  const Eigen::Ref<const Matrix>& X,
                                  const Eigen::Ref<const Vector>& y,
                                  const KernelParams& params, long cap = 2000);

}  // namespace pgp::oracle

#endif  // PGP_ORACLE_HPP_
