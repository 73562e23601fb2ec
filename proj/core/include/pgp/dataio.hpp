#ifndef PGP_DATAIO_HPP_
#define PGP_DATAIO_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pgp/kernel.hpp"

namespace pgp {

struct Dataset {
  Matrix X;
  Vector y;
  std::vector<std::string> column_names;  // feature names, size D

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index d() const { return X.cols(); }
};

struct CsvOptions {
  char delimiter = ',';
};

struct LoadResult {
  Dataset data;
  long dropped_rows = 0;  // rows removed for missing/non-numeric values
};

/// Reads a headered CSV. Rows with missing or non-numeric values in the
/// selected columns are dropped and counted. An empty target_column loads
/// features only (y is left at zero), for prediction-time query files.
LoadResult load_csv(const std::string& path, const std::string& target_column,
                    const std::vector<std::string>& feature_columns,
                    const CsvOptions& opts = {});

/// Per-column input min/max and target mean/std, fitted on the training
/// split only. Inputs map to [0,1] on the training data (test inputs may
/// fall outside and are not clipped); targets map to zero mean, unit
/// population standard deviation.
struct Normalizer {
  Vector x_min;
  Vector x_max;
  double y_mean = 0.0;
  double y_std = 1.0;

  static Normalizer fit(const Dataset& train);

  Matrix apply_x(const Eigen::Ref<const Matrix>& X) const;
  Vector apply_y(const Eigen::Ref<const Vector>& y) const;
  Matrix invert_x(const Eigen::Ref<const Matrix>& Xn) const;
  Vector invert_y(const Eigen::Ref<const Vector>& yn) const;
  double invert_y(double yn) const { return yn * y_std + y_mean; }

  Dataset apply(const Dataset& ds) const;
};

/// Seeded uniform shuffle then split; the two parts partition the input.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed);

/// y = x sin(4 pi x) + N(0, noise_std^2), x ~ U[0,1].
Dataset synth_1d(long n, double noise_std, std::uint64_t seed);

/// The noiseless curve behind synth_1d.
double synth_1d_truth(double x);

/// Smooth function of the first d_relevant coordinates plus noise; the
/// remaining coordinates are pure distractors. All inputs ~ U[0,1].
Dataset synth_highdim(long n, int d_total, int d_relevant, double noise_std,
                      std::uint64_t seed);

}  // namespace pgp

#endif  // PGP_DATAIO_HPP_
