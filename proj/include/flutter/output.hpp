#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "flutter/field.hpp"
#include "flutter/greens.hpp"

namespace flutter {

/// Fixed scientific notation with 12 significant digits ("nan" for non-finite values).
std::string format_number(double v);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& bytes);

/// Collects output files in one directory and records each with its digest.
class RunOutputs {
 public:
  /// Creates the directory if needed; throws IoError (with the path) when that fails.
  explicit RunOutputs(std::filesystem::path directory, std::string prefix = {});

  /// Writes `content` to directory/prefix+name and returns the full path. Throws IoError.
  std::filesystem::path write(const std::string& name, const std::string& content);

  const std::filesystem::path& directory() const { return dir_; }
  nlohmann::json file_list() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string prefix_;
  nlohmann::json files_ = nlohmann::json::array();
};

std::string flutter_mask_csv(const FlutterMask& mask);
std::string profile_csv(const std::vector<ProfileSample>& profile);
std::string field_csv(const FieldMap& map);

/// Scalar extracted from a field map: re_u1, im_u1, re_u2, im_u2, abs_u1, abs_u2 or abs_u.
std::vector<double> field_scalar(const FieldMap& map, const std::string& name);

struct PgmImage {
  std::string bytes;   ///< binary P5 raster, top row at the largest x2
  double min = 0.0;
  double max = 0.0;
};

/// Linear map of [min, max] over unmasked cells to 0..255; masked cells are written as 0.
PgmImage field_pgm(const FieldMap& map, const std::vector<double>& scalar);

/// Sidecar text recording the value range of a raster.
std::string pgm_sidecar(const std::string& scalar, const PgmImage& img);

}  // namespace flutter
