#include <cmath>
#include <random>

#include "doctest.h"
#include "pgp/adam.hpp"
#include "../test_util.hpp"

using namespace pgp;

TEST_CASE("adam_step") {
  AdamConfig cfg;  // defaults: 1e-3, 0.9, 0.999, 1e-8

  SUBCASE("zero gradient leaves parameters unchanged") {
    AdamState opt(3, cfg);
    const Vector params = Vector::LinSpaced(3, -1.0, 1.0);
    const auto [opt2, out] = adam_step(opt, params, Vector::Zero(3));
    CHECK(opt2.step_count == 1);
    CHECK((out - params).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("first step moves by ~alpha against the gradient sign") {
    AdamState opt(1, cfg);
    Vector params(1), grad(1);
    params << 0.5;
    grad << 3.7;
    const auto [opt2, out] = adam_step(opt, params, grad);
    // With bias correction the first step is alpha * g / (|g| + eps').
    CHECK(out[0] == doctest::Approx(0.5 - cfg.alpha).epsilon(1e-6));
  }

  SUBCASE("constant positive gradient decreases the parameter monotonically") {
    AdamState opt(1, cfg);
    Vector params(1), grad(1);
    params << 2.0;
    grad << 0.3;
    double prev = params[0];
    for (int i = 0; i < 5; ++i) {
      auto [opt2, out] = adam_step(opt, params, grad);
      opt = std::move(opt2);
      params = out;
      CHECK(params[0] < prev);
      prev = params[0];
    }
  }

  SUBCASE("determinism: identical inputs give bit-identical outputs") {
    std::mt19937_64 rng(3);
    AdamState opt(4, cfg);
    opt.step_count = 7;
    opt.first_moment = pgp_test::random_vector(4, rng);
    opt.second_moment = pgp_test::random_vector(4, rng, 0.0, 1.0);
    const Vector params = pgp_test::random_vector(4, rng);
    const Vector grad = pgp_test::random_vector(4, rng);
    const auto [o1, p1] = adam_step(opt, params, grad);
    const auto [o2, p2] = adam_step(opt, params, grad);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((o1.first_moment - o2.first_moment).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("per-coordinate step magnitude stays below 2*alpha") {
    std::mt19937_64 rng(4);
    AdamState opt(6, cfg);
    Vector params = Vector::Zero(6);
    for (int it = 0; it < 200; ++it) {
      const Vector grad = pgp_test::random_vector(6, rng, -50.0, 50.0);
      auto [opt2, out] = adam_step(opt, params, grad);
      CHECK((out - params).cwiseAbs().maxCoeff() <= 2.0 * cfg.alpha);
      opt = std::move(opt2);
      params = out;
    }
  }

  SUBCASE("non-finite gradient names the coordinate") {
    AdamState opt(3, cfg);
    Vector grad = Vector::Zero(3);
    grad[2] = std::nan("");
    try {
      adam_step(opt, Vector::Zero(3), grad);
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("coordinate 2") != std::string::npos);
    }
  }

  SUBCASE("moment length mismatch throws") {
    AdamState opt(2, cfg);
    CHECK_THROWS_AS(adam_step(opt, Vector::Zero(3), Vector::Zero(3)),
                    DimensionError);
  }
}
