#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "flutter/config.hpp"
#include "flutter/output.hpp"

namespace flutter {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Each command writes its files through `out` and returns the "results" block of the manifest.
nlohmann::json cmd_flutter_map(const RunConfig& cfg, RunOutputs& out);
nlohmann::json cmd_thresholds(const RunConfig& cfg, RunOutputs& out);
nlohmann::json cmd_greens_profile(const RunConfig& cfg, RunOutputs& out);
nlohmann::json cmd_dipole_field(const RunConfig& cfg, RunOutputs& out);

/// Growth classification of a radial profile: "flutter: growth detected",
/// "flutter: no growth within range" or "no flutter".
struct ProfileClassification {
  bool flutter_directions = false;   ///< some propagation direction has complex wave speeds
  double growth_ratio = 0.0;         ///< max |G| over the outer third of the ray over max over the middle third
  std::string label;
};

ProfileClassification classify_profile(const MaterialState& state,
                                       const std::vector<ProfileSample>& profile);

/// Runs `verb` (flutter-map, thresholds, greens-profile, dipole-field), writes manifest.json
/// next to the outputs, and returns it. `out_dir` overrides output.directory when non-empty.
nlohmann::json run_command(const std::string& verb, const RunConfig& cfg,
                           const std::filesystem::path& out_dir);

struct SelfcheckOptions {
  std::uint64_t seed = 20240613;
  bool inject_f3_sign_error = false;   ///< mutation hook: flips f3 in the three-inequality comparison
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts);

/// Prints one "PASS|FAIL name: detail" line per check; returns kExitOk only if all pass.
/// When `report_dir` is non-empty the same text is written to report_dir/selfcheck.txt
/// (IoError with the path if that fails).
int cmd_selfcheck(const SelfcheckOptions& opts, std::ostream& os,
                  const std::filesystem::path& report_dir = {});

}  // namespace flutter
