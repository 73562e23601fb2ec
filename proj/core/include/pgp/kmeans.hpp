#ifndef PGP_KMEANS_HPP_
#define PGP_KMEANS_HPP_

#include <cstdint>

#include "pgp/kernel.hpp"

namespace pgp {

struct KMeansConfig {
  int k = 8;
  int max_iters = 100;
  double rel_tol = 1e-6;  // relative WCSS improvement stopping threshold
  std::uint64_t seed = 0;
  int sample_cap = 100000;  // clustering runs on at most this many points
};

/// Lloyd's algorithm with k-means++ seeding on (a uniform subsample of) the
/// points. Empty clusters are re-seeded from the point farthest from its
/// centroid. Deterministic under a fixed seed.
Matrix kmeans(const Eigen::Ref<const Matrix>& points, const KMeansConfig& cfg);

}  // namespace pgp

#endif  // PGP_KMEANS_HPP_
