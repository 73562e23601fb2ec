#ifndef PGP_MODEL_IO_HPP_
#define PGP_MODEL_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pgp/dataio.hpp"
#include "pgp/pgp.hpp"

namespace pgp {

/// Self-describing model container: a plain-text header (version, dims,
/// column names, scalars) followed by dense little-endian IEEE-754 doubles
/// for Z, m, S in row-major order. Save -> load -> save is byte-identical.
struct ModelFile {
  int format_version = 1;
  PgpState state;
  Normalizer normalizer;
  std::vector<std::string> column_names;
  std::uint64_t seed = 0;
  long iterations = 0;
  std::string data_fingerprint;  // hex digest of the training arrays
};

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

/// FNV-1a over the raw bytes of X then y, as a 16-hex-digit string.
std::string dataset_fingerprint(const Dataset& ds);

}  // namespace pgp

#endif  // PGP_MODEL_IO_HPP_
