#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "pgp/dataio.hpp"

using namespace pgp;

namespace {

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& contents) {
    path = std::string(std::tmpnam(nullptr)) + ".csv";
    std::ofstream out(path);
    out << contents;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv") {
  SUBCASE("well-formed file") {
    TempCsv f("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
    const auto res = load_csv(f.path, "y", {"a", "b"});
    CHECK(res.data.n() == 3);
    CHECK(res.data.d() == 2);
    CHECK(res.dropped_rows == 0);
    CHECK(res.data.X(1, 0) == 4.0);
    CHECK(res.data.y[2] == 9.0);
    CHECK(res.data.column_names == std::vector<std::string>{"a", "b"});
  }

  SUBCASE("malformed rows are dropped and counted") {
    TempCsv f("a,y\n1,2\nbad,3\n4,\n5,6\n7,8\n");
    const auto res = load_csv(f.path, "y", {"a"});
    CHECK(res.data.n() == 3);
    CHECK(res.dropped_rows == 2);
  }

  SUBCASE("airline-style schema with 8 covariates") {
    TempCsv f(
        "PlaneAge,Distance,AirTime,DepTime,ArrTime,DayOfWeek,DayofMonth,Month,"
        "ArrDelay\n"
        "9,383,57,1955,2211,4,3,1,-14\n"
        "4,1829,210,628,804,5,12,6,30\n");
    const auto res = load_csv(f.path, "ArrDelay",
                              {"PlaneAge", "Distance", "AirTime", "DepTime",
                               "ArrTime", "DayOfWeek", "DayofMonth", "Month"});
    CHECK(res.data.d() == 8);
    CHECK(res.data.n() == 2);
    CHECK(res.data.y[1] == 30.0);
  }

  SUBCASE("missing file and missing column") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y", {"a"}), DataError);
    TempCsv f("a,y\n1,2\n");
    CHECK_THROWS_AS(load_csv(f.path, "z", {"a"}), DataError);
  }

  SUBCASE("zero usable rows") {
    TempCsv f("a,y\nx,x\n");
    CHECK_THROWS_AS(load_csv(f.path, "y", {"a"}), DataError);
  }

  SUBCASE("empty target name loads features only") {
    TempCsv f("a,b\n1,2\n3,4\n");
    const auto res = load_csv(f.path, "", {"a", "b"});
    CHECK(res.data.n() == 2);
    CHECK(res.data.y.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("custom delimiter") {
    TempCsv f("a;y\n1;2\n");
    const auto res = load_csv(f.path, "y", {"a"}, {';'});
    CHECK(res.data.n() == 1);
  }
}

TEST_CASE("Normalizer") {
  Dataset ds;
  ds.X.resize(3, 1);
  ds.X << 0.0, 5.0, 10.0;
  ds.y.resize(3);
  ds.y << 1.0, 3.0, 2.0;
  ds.column_names = {"a"};

  SUBCASE("inputs map to [0,1] on the training data") {
    const auto nm = Normalizer::fit(ds);
    const Matrix Xn = nm.apply_x(ds.X);
    CHECK(Xn(0, 0) == doctest::Approx(0.0));
    CHECK(Xn(1, 0) == doctest::Approx(0.5));
    CHECK(Xn(2, 0) == doctest::Approx(1.0));
  }

  SUBCASE("targets: population-std convention") {
    Dataset two;
    two.X.resize(2, 1);
    two.X << 0.0, 1.0;
    two.y.resize(2);
    two.y << 1.0, 3.0;
    const auto nm = Normalizer::fit(two);
    CHECK(nm.y_mean == doctest::Approx(2.0));
    const Vector yn = nm.apply_y(two.y);
    CHECK(yn[0] == doctest::Approx(-1.0));
    CHECK(yn[1] == doctest::Approx(1.0));
  }

  SUBCASE("round trips are identities to 1e-12") {
    const auto nm = Normalizer::fit(ds);
    CHECK((nm.invert_y(nm.apply_y(ds.y)) - ds.y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((nm.invert_x(nm.apply_x(ds.X)) - ds.X).cwiseAbs().maxCoeff() < 1e-12);
    Vector yq(2);
    yq << -0.7, 2.4;
    CHECK((nm.apply_y(nm.invert_y(yq)) - yq).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("out-of-range test inputs pass through unclipped") {
    const auto nm = Normalizer::fit(ds);
    Matrix Xt(1, 1);
    Xt << 20.0;
    CHECK(nm.apply_x(Xt)(0, 0) == doctest::Approx(2.0));
  }

  SUBCASE("constant column is a hard error naming the column") {
    Dataset bad = ds;
    bad.X.col(0).setConstant(3.0);
    try {
      Normalizer::fit(bad);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
  }

  SUBCASE("zero target variance is a hard error") {
    Dataset bad = ds;
    bad.y.setConstant(5.0);
    CHECK_THROWS_AS(Normalizer::fit(bad), DataError);
  }
}

TEST_CASE("split") {
  Dataset ds;
  ds.X.resize(9, 1);
  ds.X.col(0) = Vector::LinSpaced(9, 0, 8);
  ds.y = ds.X.col(0);

  SUBCASE("sizes and partition") {
    Dataset small;
    small.X.resize(3, 1);
    small.X << 0, 1, 2;
    small.y = small.X.col(0);
    const auto [tr, te] = split(small, 2.0 / 3.0, 0);
    CHECK(tr.n() == 2);
    CHECK(te.n() == 1);

    const auto [tr9, te9] = split(ds, 2.0 / 3.0, 1);
    CHECK(tr9.n() + te9.n() == 9);
    std::vector<bool> seen(9, false);
    for (Eigen::Index i = 0; i < tr9.n(); ++i) seen[(int)tr9.y[i]] = true;
    for (Eigen::Index i = 0; i < te9.n(); ++i) {
      CHECK(!seen[(int)te9.y[i]]);
      seen[(int)te9.y[i]] = true;
    }
    for (bool s : seen) CHECK(s);
  }

  SUBCASE("same seed gives the same split, different seeds differ") {
    const auto [a1, b1] = split(ds, 0.5, 3);
    const auto [a2, b2] = split(ds, 0.5, 3);
    CHECK((a1.y - a2.y).cwiseAbs().maxCoeff() == 0.0);
    bool any_diff = false;
    for (std::uint64_t s = 4; s < 10 && !any_diff; ++s) {
      const auto [a3, b3] = split(ds, 0.5, s);
      any_diff = (a1.y - a3.y).cwiseAbs().maxCoeff() > 0.0;
    }
    CHECK(any_diff);
  }

  SUBCASE("bad fraction throws") {
    CHECK_THROWS_AS(split(ds, 0.0, 0), ConfigError);
    CHECK_THROWS_AS(split(ds, 1.0, 0), ConfigError);
  }
}

TEST_CASE("synth_1d") {
  SUBCASE("noiseless points lie on the curve") {
    const Dataset ds = synth_1d(100, 0.0, 5);
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      CHECK(ds.y[i] == doctest::Approx(synth_1d_truth(ds.X(i, 0))).epsilon(1e-12));
    CHECK(synth_1d_truth(0.125) == doctest::Approx(0.125).epsilon(1e-12));
  }

  SUBCASE("noise residual mean obeys a CLT bound") {
    const long n = 6000;
    const double noise = 0.1;
    const Dataset ds = synth_1d(n, noise, 6);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      acc += ds.y[i] - synth_1d_truth(ds.X(i, 0));
    CHECK(std::abs(acc / n) < 4.0 * noise / std::sqrt((double)n));
  }
}

TEST_CASE("synth_highdim") {
  SUBCASE("d_relevant = 0 yields pure noise") {
    const Dataset ds = synth_highdim(2000, 4, 0, 0.3, 7);
    const double mean = ds.y.mean();
    const double var = (ds.y.array() - mean).square().mean();
    CHECK(std::abs(mean) < 0.05);
    CHECK(var == doctest::Approx(0.09).epsilon(0.15));
  }

  SUBCASE("d_relevant = d_total = 1 is a 1-D smooth regression") {
    const Dataset ds = synth_highdim(50, 1, 1, 0.0, 8);
    CHECK(ds.d() == 1);
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      CHECK(ds.y[i] ==
            doctest::Approx(std::sin(2.0 * 3.14159265358979324 * ds.X(i, 0)))
                .epsilon(1e-9));
  }

  SUBCASE("distractor columns carry no signal") {
    const Dataset ds = synth_highdim(4000, 3, 1, 0.0, 9);
    // Correlation of y with a distractor column should be ~0.
    const Vector yc = ds.y.array() - ds.y.mean();
    const Vector x2 = ds.X.col(2).array() - ds.X.col(2).mean();
    const double corr = yc.dot(x2) / (yc.norm() * x2.norm());
    CHECK(std::abs(corr) < 0.05);
  }
}
