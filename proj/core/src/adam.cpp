#include "pgp/adam.hpp"

#include <cmath>
#include <string>

namespace pgp {

std::pair<AdamState, Vector> adam_step(const AdamState& opt, const Vector& params,
                                       const Vector& grad) {
  const auto n = params.size();
  if (opt.first_moment.size() != n || opt.second_moment.size() != n ||
      grad.size() != n)
    throw DimensionError("adam_step: parameter/gradient/moment length mismatch");
  if (!(opt.cfg.beta1 >= 0.0 && opt.cfg.beta1 < 1.0 && opt.cfg.beta2 >= 0.0 &&
        opt.cfg.beta2 < 1.0))
    throw ConfigError("adam_step: beta1, beta2 must lie in [0, 1)");

  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isfinite(grad[i]))
      throw NumericalError("adam_step: non-finite gradient at coordinate " +
                           std::to_string(i));

  Vector g = grad;
  if (opt.cfg.grad_clip > 0.0)
    g = g.cwiseMax(-opt.cfg.grad_clip).cwiseMin(opt.cfg.grad_clip);

  AdamState next = opt;
  next.step_count = opt.step_count + 1;
  const double t = static_cast<double>(next.step_count);
  next.first_moment = opt.cfg.beta1 * opt.first_moment + (1.0 - opt.cfg.beta1) * g;
  next.second_moment =
      opt.cfg.beta2 * opt.second_moment +
      (1.0 - opt.cfg.beta2) * g.array().square().matrix();

  const double bc1 = 1.0 - std::pow(opt.cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(opt.cfg.beta2, t);
  const Vector m_hat = next.first_moment / bc1;
  const Vector v_hat = next.second_moment / bc2;

  Vector out = params.array() -
               opt.cfg.alpha * m_hat.array() /
                   (v_hat.array().sqrt() + opt.cfg.epsilon);
  return {std::move(next), std::move(out)};
}

}  // namespace pgp
