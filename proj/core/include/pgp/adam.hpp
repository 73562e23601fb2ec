#ifndef PGP_ADAM_HPP_
#define PGP_ADAM_HPP_

#include "pgp/kernel.hpp"

namespace pgp {

/// Adam with bias correction. Defaults follow the usual recommendation:
/// alpha=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8.
struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double grad_clip = 0.0;  // 0 disables per-coordinate clipping
};

struct AdamState {
  long step_count = 0;
  Vector first_moment;
  Vector second_moment;
  AdamConfig cfg;

  AdamState() = default;
  AdamState(int dim, const AdamConfig& c)
      : first_moment(Vector::Zero(dim)), second_moment(Vector::Zero(dim)), cfg(c) {}
};

/// One Adam update. Pure: returns the new optimizer state and parameters.
/// Throws NumericalError naming the offending coordinate on non-finite
/// gradient entries.
std::pair<AdamState, Vector> adam_step(const AdamState& opt, const Vector& params,
                                       const Vector& grad);

}  // namespace pgp

#endif  // PGP_ADAM_HPP_
