#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pgp/model_io.hpp"
#include "../test_util.hpp"

using namespace pgp;

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile sample_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModelFile mf;
  mf.state = init(pgp_test::spread_points(5, 2, rng),
                  pgp_test::random_params(2, rng));
  mf.state.m = pgp_test::random_vector(5, rng);
  mf.normalizer.x_min = Vector::Zero(2);
  mf.normalizer.x_max = Vector::Ones(2);
  mf.normalizer.y_mean = 0.37;
  mf.normalizer.y_std = 1.21;
  mf.column_names = {"alpha", "beta"};
  mf.seed = 99;
  mf.iterations = 1234;
  mf.data_fingerprint = "00deadbeef00cafe";
  return mf;
}

}  // namespace

TEST_CASE("model file round trip") {
  const ModelFile mf = sample_model(1);
  const std::string p1 = std::string(std::tmpnam(nullptr)) + ".pgp";
  const std::string p2 = std::string(std::tmpnam(nullptr)) + ".pgp";
  save_model(mf, p1);
  const ModelFile back = load_model(p1);
  save_model(back, p2);

  SUBCASE("save -> load -> save is byte-identical") {
    CHECK(read_bytes(p1) == read_bytes(p2));
  }

  SUBCASE("all fields survive") {
    CHECK(back.format_version == 1);
    CHECK(back.column_names == mf.column_names);
    CHECK(back.seed == mf.seed);
    CHECK(back.iterations == mf.iterations);
    CHECK(back.data_fingerprint == mf.data_fingerprint);
    CHECK((back.state.Z - mf.state.Z).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.state.m - mf.state.m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.state.S - mf.state.S).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.state.params.log_gamma == mf.state.params.log_gamma);
    CHECK((back.state.params.log_w - mf.state.params.log_w)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(back.normalizer.y_std == mf.normalizer.y_std);
  }

  SUBCASE("loaded model predicts bit-identically") {
    std::mt19937_64 rng(2);
    const Matrix Xq = pgp_test::random_matrix(50, 2, rng);
    const Prediction a = predict(mf.state, Xq);
    const Prediction b = predict(back.state, Xq);
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.variance - b.variance).cwiseAbs().maxCoeff() == 0.0);
  }

  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("unknown format version is rejected") {
  const ModelFile mf = sample_model(3);
  const std::string path = std::string(std::tmpnam(nullptr)) + ".pgp";
  save_model(mf, path);
  std::string bytes = read_bytes(path);
  bytes.replace(bytes.find("PGPMODEL 1"), 10, "PGPMODEL 7");
  {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(load_model(path), DataError);
  std::remove(path.c_str());
}

TEST_CASE("truncated binary section is rejected") {
  const ModelFile mf = sample_model(4);
  const std::string path = std::string(std::tmpnam(nullptr)) + ".pgp";
  save_model(mf, path);
  std::string bytes = read_bytes(path);
  bytes.resize(bytes.size() - 16);
  {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(load_model(path), DataError);
  std::remove(path.c_str());
}

TEST_CASE("dataset fingerprint is order-sensitive and stable") {
  Dataset a;
  a.X = Matrix::Identity(3, 3);
  a.y = Vector::LinSpaced(3, 0, 2);
  Dataset b = a;
  CHECK(dataset_fingerprint(a) == dataset_fingerprint(b));
  b.y[0] = 5.0;
  CHECK(dataset_fingerprint(a) != dataset_fingerprint(b));
  CHECK(dataset_fingerprint(a).size() == 16);
}
