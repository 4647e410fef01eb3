#include "flutter/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.3.0";

json material_json(const MaterialState& m) {
  return {{"lambda_over_mu", m.elastic.lambda_over_mu},
          {"b_hat_deg", m.elastic.b_hat_deg},
          {"theta_sigma_deg", m.elastic.theta_sigma_deg},
          {"H_over_mu", m.plastic.H_over_mu},
          {"psi_deg", m.plastic.psi_deg},
          {"chi_deg", m.plastic.chi_deg},
          {"theta_L_deg", m.stress.theta_L_deg},
          {"dev_hat", m.stress.dev_hat},
          {"dev_magnitude_over_mu", m.dev_magnitude_over_mu},
          {"mean_stress_over_mu", m.mean_stress_over_mu}};
}

json greens_json(const GreensEvalConfig& g) {
  return {{"omega_bar", g.omega_bar},
          {"quad_rel_tol", g.quad_rel_tol},
          {"quad_max_subdiv", g.quad_max_subdiv},
          {"defective_perturb", g.defective_perturb}};
}

json fans_json(const std::vector<AngleInterval>& fans) {
  json a = json::array();
  for (const auto& f : fans) a.push_back({{"lo_deg", f.lo_deg}, {"hi_deg", f.hi_deg}, {"mid_deg", f.mid()}});
  return a;
}

void check_axis(const ScanAxis& axis, const std::string& what) {
  if (axis.steps < 1) throw ConfigError(what + " range is empty (steps < 1)");
  if (axis.steps > 1 && !(axis.max > axis.min)) {
    throw ConfigError(what + " range is empty (max must exceed min)");
  }
}

json thresholds_json(const MaterialState& m) {
  const PdThreshold pd = pd_threshold(m);
  const EllipticityThreshold el = ellipticity_threshold(m);
  json j;
  j["H_PD_over_mu"] = pd.lost ? json(pd.H_cr) : json(nullptr);
  j["H_E_over_mu"] = el.lost ? json(el.H_cr) : json(nullptr);
  j["theta_nE_deg"] = el.lost ? json(el.theta_nE_deg) : json(nullptr);
  return j;
}

std::string optional_number(const json& v) {
  return v.is_null() ? std::string("nan") : format_number(v.get<double>());
}

}  // namespace

json cmd_flutter_map(const RunConfig& cfg, RunOutputs& out) {
  const auto& a = cfg.analysis;
  check_axis(a.H_axis, "H/mu");
  check_axis(a.theta_axis, "theta_n");
  if (!(a.H_axis.min > 0.0)) throw ConfigError("H/mu range must be positive");

  const FlutterMask mask = flutter_region_scan(cfg.material, a.H_axis, a.theta_axis);
  if (cfg.output.csv) out.write("flutter_map.csv", flutter_mask_csv(mask));

  json regions = json::array();
  for (const auto& r : connected_regions(mask)) {
    regions.push_back({{"H_min", r.H_min},
                       {"H_max", r.H_max},
                       {"theta_min_deg", r.theta_min_deg},
                       {"theta_max_deg", r.theta_max_deg},
                       {"cells", r.cells}});
  }
  return {{"thresholds", thresholds_json(cfg.material)},
          {"regions", regions},
          {"grid",
           {{"H_min", a.H_axis.min},
            {"H_max", a.H_axis.max},
            {"H_steps", a.H_axis.steps},
            {"theta_min_deg", a.theta_axis.min},
            {"theta_max_deg", a.theta_axis.max},
            {"theta_steps", a.theta_axis.steps}}}};
}

json cmd_thresholds(const RunConfig& cfg, RunOutputs& out) {
  const json t = thresholds_json(cfg.material);
  if (cfg.output.csv) {
    out.write("thresholds.csv", "H_PD_over_mu,H_E_over_mu,theta_nE_deg\n" +
                                    optional_number(t["H_PD_over_mu"]) + ',' +
                                    optional_number(t["H_E_over_mu"]) + ',' +
                                    optional_number(t["theta_nE_deg"]) + '\n');
  }
  return {{"thresholds", t}};
}

ProfileClassification classify_profile(const MaterialState& state,
                                       const std::vector<ProfileSample>& profile) {
  ProfileClassification c;
  c.flutter_directions = !flutter_fans(state).empty();
  if (profile.size() >= 3) {
    const double r0 = profile.front().r, r1 = profile.back().r;
    // The inner third is skipped: the logarithmic singularity dominates there.
    const double mid_start = r0 + (r1 - r0) / 3.0, outer_start = r1 - (r1 - r0) / 3.0;
    double mid = 0.0, outer = 0.0;
    for (const auto& s : profile) {
      const double m = s.g.norm();
      if (s.r >= outer_start) outer = std::max(outer, m);
      else if (s.r >= mid_start) mid = std::max(mid, m);
    }
    c.growth_ratio = mid > 0.0 ? outer / mid : 0.0;
  }
  if (!c.flutter_directions) c.label = "no flutter";
  else if (c.growth_ratio > 1.0) c.label = "flutter: growth detected";
  else c.label = "flutter: no growth within range";
  return c;
}

json cmd_greens_profile(const RunConfig& cfg, RunOutputs& out) {
  const auto& a = cfg.analysis;
  if (!(a.r_min > 0.0)) {
    throw ConfigError("analysis.r_min must be positive (logarithmic singularity at r = 0)");
  }
  if (a.r_max < a.r_min) throw ConfigError("analysis.r_max must not be below analysis.r_min");
  if (a.r_samples < 1) throw ConfigError("analysis.r_samples must be at least 1");
  validate(a.greens);

  const auto profile =
      greens_radial_profile(a.ray_deg, a.r_min, a.r_max, a.r_samples, cfg.material, a.greens);
  if (cfg.output.csv) out.write("greens_profile.csv", profile_csv(profile));
  const ProfileClassification c = classify_profile(cfg.material, profile);
  return {{"classification", c.label},
          {"flutter_directions", c.flutter_directions},
          {"growth_ratio", c.growth_ratio},
          {"flutter_fans", fans_json(flutter_fans(cfg.material))},
          {"ray_deg", a.ray_deg},
          {"r_min", a.r_min},
          {"r_max", a.r_max},
          {"r_samples", a.r_samples},
          {"greens", greens_json(a.greens)}};
}

json cmd_dipole_field(const RunConfig& cfg, RunOutputs& out) {
  const auto& a = cfg.analysis;
  if (a.grid.n1 < 1 || a.grid.n2 < 1) throw ConfigError("grid has zero cells");
  validate(a.grid);
  validate(a.greens);

  const FieldMap map = sample_grid(a.dipole, cfg.material, a.greens, a.grid, a.quadrature);
  if (cfg.output.csv) out.write("dipole_field.csv", field_csv(map));
  json rasters = json::array();
  if (cfg.output.pgm) {
    for (const auto& name : cfg.output.pgm_scalars) {
      const PgmImage img = field_pgm(map, field_scalar(map, name));
      out.write(name + ".pgm", img.bytes);
      out.write(name + ".pgm.txt", pgm_sidecar(name, img));
      rasters.push_back({{"scalar", name}, {"min", img.min}, {"max", img.max}});
    }
  }

  json dominant;
  if (a.grid.n1 >= 128 && a.grid.n2 >= 128) {
    try {
      const WaveDirection w = dominant_wave_direction(map);
      dominant = {{"angle_deg", w.angle_deg},
                  {"wavelength", w.wavelength},
                  {"runner_up_ratio", w.runner_up_ratio}};
    } catch (const NumericalError& e) {
      dominant = {{"indeterminate", true}, {"reason", e.what()}};
    }
  } else {
    dominant = {{"indeterminate", true}, {"reason", "grid below 128 x 128"}};
  }
  const auto fans = flutter_fans(cfg.material);
  return {{"dominant_wave", dominant},
          {"flutter_fans", fans_json(fans)},
          {"rasters", rasters},
          {"angular_nodes", map.angular_nodes},
          {"dipole",
           {{"beta_deg", a.dipole.beta_deg},
            {"half_distance", a.dipole.half_distance},
            {"amplitude", a.dipole.amplitude}}},
          {"grid",
           {{"x1_min", a.grid.x1_min},
            {"x1_max", a.grid.x1_max},
            {"x2_min", a.grid.x2_min},
            {"x2_max", a.grid.x2_max},
            {"n1", a.grid.n1},
            {"n2", a.grid.n2},
            {"mask_radius", a.grid.mask_radius}}},
          {"greens", greens_json(a.greens)}};
}

json run_command(const std::string& verb, const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.analysis.command.empty() && cfg.analysis.command != verb) {
    throw ConfigError("analysis.command is '" + cfg.analysis.command + "' but the verb is '" + verb + "'");
  }
  using Handler = json (*)(const RunConfig&, RunOutputs&);
  Handler handler = nullptr;
  if (verb == "flutter-map") handler = cmd_flutter_map;
  else if (verb == "thresholds") handler = cmd_thresholds;
  else if (verb == "greens-profile") handler = cmd_greens_profile;
  else if (verb == "dipole-field") handler = cmd_dipole_field;
  else throw ConfigError("unknown command '" + verb + "'");

  RunOutputs out(out_dir.empty() ? cfg.output.directory : out_dir, cfg.output.prefix);
  json results = handler(cfg, out);

  json entries = json::object();
  for (const auto& [k, v] : cfg.entries) entries[k] = v;
  json manifest = {{"tool", "flutter"},
                   {"version", kVersion},
                   {"command", verb},
                   {"config", entries},
                   {"material", material_json(cfg.material)},
                   {"results", results},
                   {"files", out.file_list()}};

  const auto path = out.directory() / (cfg.output.prefix + "manifest.json");
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << manifest.dump(2) << '\n';
  if (!f) throw IoError("failed writing '" + path.string() + "'");
  return manifest;
}

}  // namespace flutter
