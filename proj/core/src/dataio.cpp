#include "pgp/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace pgp {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(out)) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

}  // namespace

LoadResult load_csv(const std::string& path, const std::string& target_column,
                    const std::vector<std::string>& feature_columns,
                    const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("load_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line, opts.delimiter);

  auto find_col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw DataError("load_csv: column '" + name + "' not found in " + path);
    return static_cast<std::size_t>(it - header.begin());
  };
  const bool have_target = !target_column.empty();
  const std::size_t target_idx = have_target ? find_col(target_column) : 0;
  std::vector<std::size_t> feat_idx;
  feat_idx.reserve(feature_columns.size());
  for (const auto& name : feature_columns) feat_idx.push_back(find_col(name));

  const std::size_t d = feat_idx.size();
  std::vector<double> xs;
  std::vector<double> ys;
  long dropped = 0;
  std::vector<double> row(d);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line, opts.delimiter);
    bool ok = true;
    double yv = 0.0;
    if (have_target &&
        (target_idx >= fields.size() || !parse_double(fields[target_idx], yv)))
      ok = false;
    for (std::size_t j = 0; ok && j < d; ++j) {
      if (feat_idx[j] >= fields.size() || !parse_double(fields[feat_idx[j]], row[j]))
        ok = false;
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    xs.insert(xs.end(), row.begin(), row.end());
    ys.push_back(yv);
  }

  const long n = static_cast<long>(ys.size());
  if (n == 0) throw DataError("load_csv: no usable rows in " + path);

  LoadResult out;
  out.dropped_rows = dropped;
  out.data.column_names = feature_columns;
  out.data.X = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      xs.data(), n, static_cast<Eigen::Index>(d));
  out.data.y = Eigen::Map<Vector>(ys.data(), n);
  return out;
}

Normalizer Normalizer::fit(const Dataset& train) {
  if (train.n() < 1) throw DataError("Normalizer: empty training set");
  Normalizer nm;
  nm.x_min = train.X.colwise().minCoeff();
  nm.x_max = train.X.colwise().maxCoeff();
  for (Eigen::Index dcol = 0; dcol < train.d(); ++dcol)
    if (!(nm.x_max[dcol] > nm.x_min[dcol])) {
      const std::string name = dcol < static_cast<Eigen::Index>(
                                          train.column_names.size())
                                   ? train.column_names[dcol]
                                   : std::to_string(dcol);
      throw DataError("Normalizer: constant input column '" + name + "'");
    }
  nm.y_mean = train.y.mean();
  // Population convention (divide by N).
  nm.y_std = std::sqrt((train.y.array() - nm.y_mean).square().mean());
  if (!(nm.y_std > 0.0)) throw DataError("Normalizer: zero target variance");
  return nm;
}

Matrix Normalizer::apply_x(const Eigen::Ref<const Matrix>& X) const {
  if (X.cols() != x_min.size())
    throw DimensionError("Normalizer: input column count mismatch");
  const Vector range = x_max - x_min;
  return (X.rowwise() - x_min.transpose()).array().rowwise() /
         range.transpose().array();
}

Vector Normalizer::apply_y(const Eigen::Ref<const Vector>& y) const {
  return (y.array() - y_mean) / y_std;
}

Matrix Normalizer::invert_x(const Eigen::Ref<const Matrix>& Xn) const {
  if (Xn.cols() != x_min.size())
    throw DimensionError("Normalizer: input column count mismatch");
  const Vector range = x_max - x_min;
  return (Xn.array().rowwise() * range.transpose().array()).rowwise() +
         x_min.transpose().array();
}

Vector Normalizer::invert_y(const Eigen::Ref<const Vector>& yn) const {
  return yn.array() * y_std + y_mean;
}

Dataset Normalizer::apply(const Dataset& ds) const {
  Dataset out;
  out.X = apply_x(ds.X);
  out.y = apply_y(ds.y);
  out.column_names = ds.column_names;
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("split: train_fraction must lie in (0, 1)");
  const Eigen::Index n = ds.n();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  const Eigen::Index n_train = static_cast<Eigen::Index>(
      std::llround(train_fraction * static_cast<double>(n)));
  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Dataset part;
    part.X.resize(count, ds.d());
    part.y.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      part.X.row(i) = ds.X.row(idx[begin + i]);
      part.y[i] = ds.y[idx[begin + i]];
    }
    part.column_names = ds.column_names;
    return part;
  };
  return {take(0, n_train), take(n_train, n - n_train)};
}

double synth_1d_truth(double x) {
  return x * std::sin(4.0 * std::numbers::pi * x);
}

Dataset synth_1d(long n, double noise_std, std::uint64_t seed) {
  if (n < 1) throw ConfigError("synth_1d: n >= 1 required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, 1.0);

  Dataset ds;
  ds.X.resize(n, 1);
  ds.y.resize(n);
  ds.column_names = {"x"};
  for (long i = 0; i < n; ++i) {
    const double x = ux(rng);
    ds.X(i, 0) = x;
    ds.y[i] = synth_1d_truth(x) + noise_std * eps(rng);
  }
  return ds;
}

Dataset synth_highdim(long n, int d_total, int d_relevant, double noise_std,
                      std::uint64_t seed) {
  if (n < 1 || d_total < 1 || d_relevant < 0 || d_relevant > d_total)
    throw ConfigError("synth_highdim: need n >= 1, 0 <= d_relevant <= d_total");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, 1.0);

  Dataset ds;
  ds.X.resize(n, d_total);
  ds.y.resize(n);
  ds.column_names.reserve(d_total);
  for (int j = 0; j < d_total; ++j)
    ds.column_names.push_back("x" + std::to_string(j));

  for (long i = 0; i < n; ++i) {
    for (int j = 0; j < d_total; ++j) ds.X(i, j) = ux(rng);
    double f = 0.0;
    for (int j = 0; j < d_relevant; ++j)
      f += std::sin(2.0 * std::numbers::pi * ds.X(i, j));
    ds.y[i] = f + noise_std * eps(rng);
  }
  return ds;
}

}  // namespace pgp
