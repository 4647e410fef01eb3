#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "flutter/acoustic.hpp"
#include "flutter/constitutive.hpp"
#include "flutter/field.hpp"
#include "flutter/greens.hpp"

namespace flutter {

struct AnalysisConfig {
  std::string command;   ///< optional; must match the CLI verb when given

  // flutter-map
  ScanAxis H_axis{0.05, 4.0, 80};
  ScanAxis theta_axis{-90.0, 90.0, 361};

  // Green's function evaluation
  GreensEvalConfig greens;

  // greens-profile
  double ray_deg = -45.0;
  double r_min = 0.1;
  double r_max = 20.0;
  int r_samples = 200;

  // dipole-field
  Dipole dipole;
  GridSpec grid;
  FieldQuadrature quadrature = FieldQuadrature::kBatched;
};

struct OutputConfig {
  std::filesystem::path directory = ".";
  std::string prefix;
  bool csv = true;
  bool pgm = true;
  std::vector<std::string> pgm_scalars{"re_u1", "im_u1", "re_u2", "im_u2", "abs_u"};
};

struct RunConfig {
  MaterialState material;
  AnalysisConfig analysis;
  OutputConfig output;
  std::vector<std::pair<std::string, std::string>> entries;   ///< as read, for the manifest
};

/// Parses the flat `section.key = value` format. `#` starts a comment; blank lines are skipped.
/// Throws ConfigError naming the source and line for unknown or duplicate keys, malformed lines
/// and unparsable values. `material.case = 1..4` loads a reference stress state (theta_L,
/// theta_sigma) before explicit keys are applied, whatever their order in the file.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");

/// Throws IoError if the file cannot be opened.
RunConfig load_config(const std::filesystem::path& path);

/// All keys the parser accepts, in documentation order.
const std::vector<std::string>& known_config_keys();

}  // namespace flutter
