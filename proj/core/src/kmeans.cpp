#include "pgp/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace pgp {

namespace {

constexpr Eigen::Index kChunk = 8192;

// Squared distances from each row of X to each row of C, one chunk at a time.
// Calls visit(row_offset, D2_chunk).
template <typename Visit>
void chunked_sqdist(const Eigen::Ref<const Matrix>& X, const Matrix& C,
                    Visit&& visit) {
  const Vector c2 = C.rowwise().squaredNorm();
  for (Eigen::Index start = 0; start < X.rows(); start += kChunk) {
    const Eigen::Index len = std::min<Eigen::Index>(kChunk, X.rows() - start);
    const auto Xb = X.middleRows(start, len);
    Matrix D2 = -2.0 * (Xb * C.transpose());
    D2.rowwise() += c2.transpose();
    D2.colwise() += Xb.rowwise().squaredNorm();
    D2 = D2.cwiseMax(0.0);
    visit(start, D2);
  }
}

Matrix plusplus_seed(const Eigen::Ref<const Matrix>& X, int k,
                     std::mt19937_64& rng) {
  const Eigen::Index n = X.rows();
  Matrix C(k, X.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  C.row(0) = X.row(first(rng));

  Vector d2 = (X.rowwise() - C.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng), acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) { pick = i; break; }
      }
    } else {
      pick = first(rng);  // all points coincide with chosen centroids
    }
    C.row(c) = X.row(pick);
    d2 = d2.cwiseMin((X.rowwise() - C.row(c)).rowwise().squaredNorm());
  }
  return C;
}

}  // namespace

Matrix kmeans(const Eigen::Ref<const Matrix>& points, const KMeansConfig& cfg) {
  if (cfg.k < 1 || cfg.max_iters < 1 || !(cfg.rel_tol > 0.0))
    throw ConfigError("kmeans: k >= 1, max_iters >= 1, rel_tol > 0 required");

  std::mt19937_64 rng(cfg.seed);
  Matrix sample;
  if (cfg.sample_cap > 0 && points.rows() > cfg.sample_cap) {
    std::vector<Eigen::Index> idx(points.rows());
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    sample.resize(cfg.sample_cap, points.cols());
    for (int i = 0; i < cfg.sample_cap; ++i) sample.row(i) = points.row(idx[i]);
  } else {
    sample = points;
  }
  const Eigen::Index n = sample.rows();
  if (n < cfg.k) throw ConfigError("kmeans: fewer points than clusters");

  Matrix C = plusplus_seed(sample, cfg.k, rng);
  std::vector<int> assign(n, 0);
  Vector point_d2(n);
  double prev_wcss = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    chunked_sqdist(sample, C, [&](Eigen::Index off, const Matrix& D2) {
      for (Eigen::Index r = 0; r < D2.rows(); ++r) {
        Eigen::Index best;
        point_d2[off + r] = D2.row(r).minCoeff(&best);
        assign[off + r] = static_cast<int>(best);
      }
    });
    const double wcss = point_d2.sum();
    if (wcss > prev_wcss * (1.0 + 1e-12))
      throw NumericalError("kmeans: within-cluster sum of squares increased");

    Matrix sums = Matrix::Zero(cfg.k, sample.cols());
    std::vector<long> counts(cfg.k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += sample.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < cfg.k; ++c) {
      if (counts[c] > 0) {
        C.row(c) = sums.row(c) / static_cast<double>(counts[c]);
      } else {
        Eigen::Index far;
        point_d2.maxCoeff(&far);
        C.row(c) = sample.row(far);
        point_d2[far] = 0.0;  // next empty cluster grabs a different point
      }
    }

    if (prev_wcss - wcss < cfg.rel_tol * std::max(prev_wcss, 1e-300) &&
        std::isfinite(prev_wcss))
      break;
    prev_wcss = wcss;
  }
  return C;
}

}  // namespace pgp
