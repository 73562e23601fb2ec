#include "pgp/model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pgp {

namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_array(std::ostream& out, const Matrix& m) {
  const RowMajor rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double) * rm.size()));
}

void read_array(std::istream& in, Matrix& m, Eigen::Index rows,
                Eigen::Index cols) {
  RowMajor rm(rows, cols);
  in.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!in) throw DataError("load_model: truncated binary section");
  m = rm;
}

std::string expect_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line))
    throw DataError("load_model: header ended before '" + key + "'");
  if (line.rfind(key + " ", 0) != 0 && line != key)
    throw DataError("load_model: expected '" + key + "' header line, got '" +
                    line + "'");
  return line.size() > key.size() ? line.substr(key.size() + 1) : std::string{};
}

Vector parse_vector(const std::string& s, Eigen::Index expect) {
  std::istringstream ss(s);
  Vector v(expect);
  for (Eigen::Index i = 0; i < expect; ++i)
    if (!(ss >> v[i])) throw DataError("load_model: malformed vector field");
  return v;
}

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(v[i]);
  }
  return out;
}

}  // namespace

std::string dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const RowMajor xr = ds.X;
  mix(xr.data(), sizeof(double) * static_cast<std::size_t>(xr.size()));
  mix(ds.y.data(), sizeof(double) * static_cast<std::size_t>(ds.y.size()));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void save_model(const ModelFile& model, const std::string& path) {
  const auto& st = model.state;
  const Eigen::Index M = st.Z.rows();
  const Eigen::Index D = st.Z.cols();
  if (st.m.size() != M || st.S.rows() != M || st.S.cols() != M ||
      st.params.dim() != D)
    throw DimensionError("save_model: inconsistent state dimensions");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_model: cannot open " + path);

  out << "PGPMODEL " << model.format_version << "\n";
  out << "d " << D << "\n";
  out << "m_inducing " << M << "\n";
  out << "columns " << model.column_names.size() << "\n";
  for (const auto& name : model.column_names) out << name << "\n";
  out << "log_gamma " << fmt_double(st.params.log_gamma) << "\n";
  out << "log_w " << join(st.params.log_w) << "\n";
  out << "log_sigma_eps " << fmt_double(st.params.log_sigma_eps) << "\n";
  out << "x_min " << join(model.normalizer.x_min) << "\n";
  out << "x_max " << join(model.normalizer.x_max) << "\n";
  out << "y_mean " << fmt_double(model.normalizer.y_mean) << "\n";
  out << "y_std " << fmt_double(model.normalizer.y_std) << "\n";
  out << "seed " << model.seed << "\n";
  out << "iterations " << model.iterations << "\n";
  out << "fingerprint " << model.data_fingerprint << "\n";
  out << "binary\n";
  write_array(out, st.Z);
  write_array(out, st.m);
  write_array(out, st.S);
  if (!out) throw DataError("save_model: write failed for " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_model: cannot open " + path);

  ModelFile model;
  {
    std::istringstream ss(expect_line(in, "PGPMODEL"));
    if (!(ss >> model.format_version))
      throw DataError("load_model: missing format version");
    if (model.format_version != 1)
      throw DataError("load_model: unsupported format_version " +
                      std::to_string(model.format_version));
  }
  const Eigen::Index D = std::stol(expect_line(in, "d"));
  const Eigen::Index M = std::stol(expect_line(in, "m_inducing"));
  const long n_cols = std::stol(expect_line(in, "columns"));
  model.column_names.resize(n_cols);
  for (auto& name : model.column_names)
    if (!std::getline(in, name)) throw DataError("load_model: truncated columns");

  auto& st = model.state;
  st.params.log_gamma = std::stod(expect_line(in, "log_gamma"));
  st.params.log_w = parse_vector(expect_line(in, "log_w"), D);
  st.params.log_sigma_eps = std::stod(expect_line(in, "log_sigma_eps"));
  model.normalizer.x_min = parse_vector(expect_line(in, "x_min"), D);
  model.normalizer.x_max = parse_vector(expect_line(in, "x_max"), D);
  model.normalizer.y_mean = std::stod(expect_line(in, "y_mean"));
  model.normalizer.y_std = std::stod(expect_line(in, "y_std"));
  model.seed = std::stoull(expect_line(in, "seed"));
  model.iterations = std::stol(expect_line(in, "iterations"));
  model.data_fingerprint = expect_line(in, "fingerprint");
  expect_line(in, "binary");

  Matrix tmp;
  read_array(in, st.Z, M, D);
  read_array(in, tmp, M, 1);
  st.m = tmp.col(0);
  read_array(in, st.S, M, M);
  return model;
}

}  // namespace pgp
