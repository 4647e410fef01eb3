#include "flutter/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw std::invalid_argument("expected a finite number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

struct Key {
  std::string name;
  Setter set;
};

#define FLUTTER_DOUBLE(key, field) {key, [](RunConfig& c, const std::string& v) { c.field = to_double(v); }}
#define FLUTTER_INT(key, field) {key, [](RunConfig& c, const std::string& v) { c.field = to_int(v); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"material.case", [](RunConfig&, const std::string& v) { (void)to_int(v); }},
      FLUTTER_DOUBLE("material.lambda_over_mu", material.elastic.lambda_over_mu),
      FLUTTER_DOUBLE("material.b_hat_deg", material.elastic.b_hat_deg),
      FLUTTER_DOUBLE("material.theta_sigma_deg", material.elastic.theta_sigma_deg),
      FLUTTER_DOUBLE("material.H_over_mu", material.plastic.H_over_mu),
      FLUTTER_DOUBLE("material.psi_deg", material.plastic.psi_deg),
      FLUTTER_DOUBLE("material.chi_deg", material.plastic.chi_deg),
      {"material.theta_L_deg",
       [](RunConfig& c, const std::string& v) { c.material.stress = dev_direction_from_lode(to_double(v)); }},
      FLUTTER_DOUBLE("material.dev_magnitude_over_mu", material.dev_magnitude_over_mu),
      FLUTTER_DOUBLE("material.mean_stress_over_mu", material.mean_stress_over_mu),

      {"analysis.command", [](RunConfig& c, const std::string& v) { c.analysis.command = v; }},
      FLUTTER_DOUBLE("analysis.H_min", analysis.H_axis.min),
      FLUTTER_DOUBLE("analysis.H_max", analysis.H_axis.max),
      FLUTTER_INT("analysis.H_steps", analysis.H_axis.steps),
      FLUTTER_DOUBLE("analysis.theta_min_deg", analysis.theta_axis.min),
      FLUTTER_DOUBLE("analysis.theta_max_deg", analysis.theta_axis.max),
      FLUTTER_INT("analysis.theta_steps", analysis.theta_axis.steps),
      FLUTTER_DOUBLE("analysis.omega_bar", analysis.greens.omega_bar),
      FLUTTER_DOUBLE("analysis.quad_rel_tol", analysis.greens.quad_rel_tol),
      FLUTTER_INT("analysis.quad_max_subdiv", analysis.greens.quad_max_subdiv),
      FLUTTER_DOUBLE("analysis.defective_perturb", analysis.greens.defective_perturb),
      FLUTTER_DOUBLE("analysis.ray_deg", analysis.ray_deg),
      FLUTTER_DOUBLE("analysis.r_min", analysis.r_min),
      FLUTTER_DOUBLE("analysis.r_max", analysis.r_max),
      FLUTTER_INT("analysis.r_samples", analysis.r_samples),
      FLUTTER_DOUBLE("analysis.beta_deg", analysis.dipole.beta_deg),
      FLUTTER_DOUBLE("analysis.half_distance", analysis.dipole.half_distance),
      FLUTTER_DOUBLE("analysis.amplitude", analysis.dipole.amplitude),
      {"analysis.grid_extent",
       [](RunConfig& c, const std::string& v) {
         const double e = to_double(v);
         c.analysis.grid.x1_min = c.analysis.grid.x2_min = -e;
         c.analysis.grid.x1_max = c.analysis.grid.x2_max = e;
       }},
      FLUTTER_DOUBLE("analysis.grid_x1_min", analysis.grid.x1_min),
      FLUTTER_DOUBLE("analysis.grid_x1_max", analysis.grid.x1_max),
      FLUTTER_DOUBLE("analysis.grid_x2_min", analysis.grid.x2_min),
      FLUTTER_DOUBLE("analysis.grid_x2_max", analysis.grid.x2_max),
      FLUTTER_INT("analysis.grid_n1", analysis.grid.n1),
      FLUTTER_INT("analysis.grid_n2", analysis.grid.n2),
      FLUTTER_DOUBLE("analysis.mask_radius", analysis.grid.mask_radius),
      {"analysis.quadrature",
       [](RunConfig& c, const std::string& v) {
         if (v == "batched") c.analysis.quadrature = FieldQuadrature::kBatched;
         else if (v == "adaptive") c.analysis.quadrature = FieldQuadrature::kAdaptive;
         else throw std::invalid_argument("expected batched or adaptive, got '" + v + "'");
       }},

      {"output.directory", [](RunConfig& c, const std::string& v) { c.output.directory = v; }},
      {"output.prefix", [](RunConfig& c, const std::string& v) { c.output.prefix = v; }},
      {"output.csv", [](RunConfig& c, const std::string& v) { c.output.csv = to_bool(v); }},
      {"output.pgm", [](RunConfig& c, const std::string& v) { c.output.pgm = to_bool(v); }},
      {"output.pgm_scalars",
       [](RunConfig& c, const std::string& v) {
         static const std::set<std::string> allowed{"re_u1", "im_u1", "re_u2", "im_u2", "abs_u1",
                                                    "abs_u2", "abs_u"};
         auto list = to_list(v);
         for (const auto& s : list) {
           if (!allowed.count(s)) throw std::invalid_argument("unknown scalar '" + s + "'");
         }
         c.output.pgm_scalars = std::move(list);
       }},
  };
  return table;
}

#undef FLUTTER_DOUBLE
#undef FLUTTER_INT

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : keys()) n.push_back(k.name);
    return n;
  }();
  return names;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, const Key*> lookup;
  for (const auto& k : keys()) lookup[k.name] = &k;

  struct Line {
    int number;
    std::string key, value;
  };
  std::vector<Line> lines;
  std::map<std::string, int> seen;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!lookup.count(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (seen.count(key)) {
      throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                        std::to_string(seen[key]) + ")");
    }
    if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
    seen[key] = number;
    lines.push_back({number, key, value});
  }

  RunConfig cfg;
  cfg.material = reference_case(1, 1.0);
  cfg.material.elastic.theta_sigma_deg = 0.0;
  auto apply = [&](const Line& l) {
    try {
      lookup[l.key]->set(cfg, l.value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(l.number) + ": " + l.key + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source + ":" + std::to_string(l.number) + ": " + l.key + ": " + e.what());
    }
  };
  for (const auto& l : lines) {
    if (l.key != "material.case") continue;
    apply(l);
    try {
      const double H = cfg.material.plastic.H_over_mu;
      cfg.material = reference_case(to_int(l.value), H);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(l.number) + ": material.case: " + e.what());
    }
  }
  for (const auto& l : lines) {
    if (l.key != "material.case") apply(l);
    cfg.entries.emplace_back(l.key, l.value);
  }
  try {
    validate(cfg.material);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

}  // namespace flutter
