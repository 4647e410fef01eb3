#include "flutter/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

constexpr double kPi = std::numbers::pi;

double max_distance(const GridSpec& g, const Vec2& p) {
  const double dx = std::max(std::abs(g.x1_min - p.x()), std::abs(g.x1_max - p.x()));
  const double dy = std::max(std::abs(g.x2_min - p.y()), std::abs(g.x2_max - p.y()));
  return std::hypot(dx, dy);
}

}  // namespace

Vec2 Dipole::offset() const {
  const double b = deg_to_rad(beta_deg);
  return half_distance * Vec2(std::cos(b), std::sin(b));
}

Vec2c Dipole::force() const {
  const double b = deg_to_rad(beta_deg);
  return Vec2c(amplitude * std::cos(b), amplitude * std::sin(b));
}

Vec2c dipole_displacement(const Vec2& x_bar, const Dipole& dipole, const MaterialState& state,
                          const GreensEvalConfig& config) {
  const Vec2 xp = dipole.center + dipole.offset();
  const Vec2 xm = dipole.center - dipole.offset();
  if ((x_bar - xp).norm() == 0.0 || (x_bar - xm).norm() == 0.0) {
    throw std::invalid_argument("dipole_displacement: point coincides with a force point");
  }
  const Vec2c f = dipole.force();
  if (dipole.amplitude == 0.0) return Vec2c::Zero();
  return greens_at(x_bar - xp, state, config).g * f - greens_at(x_bar - xm, state, config).g * f;
}

void validate(const GridSpec& grid) {
  if (grid.n1 < 1 || grid.n2 < 1) throw ConfigError("grid must have at least one cell per axis");
  if (grid.n1 > 1 && !(grid.x1_max > grid.x1_min)) throw ConfigError("grid x1 range is empty");
  if (grid.n2 > 1 && !(grid.x2_max > grid.x2_min)) throw ConfigError("grid x2 range is empty");
  if (!(grid.mask_radius >= 0.0)) throw ConfigError("mask radius must be nonnegative");
}

FieldMap sample_grid(const Dipole& dipole, const MaterialState& state,
                     const GreensEvalConfig& config, const GridSpec& grid,
                     FieldQuadrature method) {
  validate(grid);
  validate(config);
  FieldMap map;
  map.grid = grid;
  map.state = state;
  map.config = config;
  map.dipole = dipole;
  const std::size_t cells = std::size_t(grid.n1) * grid.n2;
  map.u.assign(cells, Vec2c::Zero());
  map.masked.assign(cells, 0);

  const Vec2 xp = dipole.center + dipole.offset();
  const Vec2 xm = dipole.center - dipole.offset();
  for (int j = 0; j < grid.n2; ++j) {
    for (int i = 0; i < grid.n1; ++i) {
      const Vec2 x(grid.x1(i), grid.x2(j));
      const double d = std::min((x - xp).norm(), (x - xm).norm());
      if (d <= grid.mask_radius || d == 0.0) map.masked[map.index(i, j)] = 1;
    }
  }
  if (dipole.amplitude == 0.0) return map;

  if (method == FieldQuadrature::kAdaptive) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < cells; ++c) {
      if (map.masked[c]) continue;
      const int i = int(c % grid.n1), j = int(c / grid.n1);
      map.u[c] = dipole_displacement({grid.x1(i), grid.x2(j)}, dipole, state, config);
    }
    return map;
  }

  const double r_max = std::max(max_distance(grid, xp), max_distance(grid, xm)) * (1.0 + 1e-9);
  const GreensFieldEvaluator ev(state, config, dipole.force(), r_max);
  map.angular_nodes = ev.angular_nodes();
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t c = 0; c < cells; ++c) {
    if (map.masked[c]) continue;
    const int i = int(c % grid.n1), j = int(c / grid.n1);
    const Vec2 x(grid.x1(i), grid.x2(j));
    map.u[c] = ev.apply(x - xp) - ev.apply(x - xm);
  }
  return map;
}

WaveDirection dominant_wave_direction(const GridSpec& grid, const std::vector<double>& field,
                                      int padding) {
  const int n1 = grid.n1, n2 = grid.n2;
  if (n1 < 128 || n2 < 128) throw std::invalid_argument("dominant_wave_direction: grid below 128x128");
  if (field.size() != std::size_t(n1) * n2) throw std::invalid_argument("dominant_wave_direction: size mismatch");
  if (std::all_of(field.begin(), field.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("dominant_wave_direction: field is identically zero");
  }
  padding = std::max(padding, 1);
  const int p1 = n1 * padding, p2 = n2 * padding;
  const int h1 = p1 / 2 + 1;

  double* in = fftw_alloc_real(std::size_t(p1) * p2);
  fftw_complex* out = fftw_alloc_complex(std::size_t(h1) * p2);
  // Row-major (x2 outer, x1 inner): the half-spectrum axis is k1.
  fftw_plan plan = fftw_plan_dft_r2c_2d(p2, p1, in, out, FFTW_ESTIMATE);
  std::fill(in, in + std::size_t(p1) * p2, 0.0);
  for (int j = 0; j < n2; ++j) {
    const double wj = n2 > 1 ? 0.5 - 0.5 * std::cos(2.0 * kPi * j / (n2 - 1)) : 1.0;
    for (int i = 0; i < n1; ++i) {
      const double wi = n1 > 1 ? 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n1 - 1)) : 1.0;
      const double v = field[std::size_t(j) * n1 + i];
      in[std::size_t(j) * p1 + i] = std::isfinite(v) ? wi * wj * v : 0.0;
    }
  }
  fftw_execute(plan);

  std::vector<double> mag(std::size_t(h1) * p2);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);

  auto at = [&](int m1, int m2) {   // m1 in [0, h1), m2 signed
    const int r = ((m2 % p2) + p2) % p2;
    return mag[std::size_t(r) * h1 + m1];
  };
  // Half-plane of signed (m1 >= 0, m2) indices; (0, m2) and (0, -m2) are mirror images.
  struct Peak {
    int m1, m2;
    double v;
  };
  std::vector<Peak> peaks;
  for (int m2 = -p2 / 2 + 1; m2 < p2 / 2; ++m2) {
    for (int m1 = 0; m1 < h1 - 1; ++m1) {
      if (m1 == 0 && m2 <= 0) continue;
      const double v = at(m1, m2);
      bool is_max = true;
      for (int d2 = -1; d2 <= 1 && is_max; ++d2) {
        for (int d1 = -1; d1 <= 1; ++d1) {
          if (d1 == 0 && d2 == 0) continue;
          int q1 = m1 + d1, q2 = m2 + d2;
          if (q1 < 0) q1 = -q1, q2 = -q2;   // Hermitian mirror across k1 = 0
          if (q1 == 0 && q2 == 0) continue;
          if (at(q1, q2) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({m1, m2, v});
    }
  }
  if (peaks.empty()) throw NumericalError("dominant_wave_direction: no spectral peak");
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.v > b.v; });
  const Peak& top = peaks.front();

  // A runner-up counts only outside the main lobe (Hann: two unpadded bins either side).
  const double lobe = 2.0 * padding;
  double runner = 0.0;
  for (std::size_t k = 1; k < peaks.size(); ++k) {
    const double d = std::hypot(peaks[k].m1 - top.m1, peaks[k].m2 - top.m2);
    const double dm = std::hypot(peaks[k].m1 + top.m1, peaks[k].m2 + top.m2);
    if (std::min(d, dm) > lobe) {
      runner = peaks[k].v;
      break;
    }
  }
  WaveDirection res;
  res.runner_up_ratio = runner / top.v;
  if (res.runner_up_ratio >= 0.99) {
    throw NumericalError("dominant_wave_direction: spectral peak is not unique within 1% "
                         "(indeterminate)");
  }

  auto parabolic = [](double ym, double y0, double yp) {
    const double lm = std::log(std::max(ym, 1e-300));
    const double l0 = std::log(std::max(y0, 1e-300));
    const double lp = std::log(std::max(yp, 1e-300));
    const double den = lm - 2.0 * l0 + lp;
    if (den >= 0.0) return 0.0;
    return std::clamp(0.5 * (lm - lp) / den, -0.5, 0.5);
  };
  auto mirrored = [&](int m1, int m2) { return m1 < 0 ? at(-m1, -m2) : at(m1, m2); };
  const double f1 = top.m1 + parabolic(mirrored(top.m1 - 1, top.m2), top.v, mirrored(top.m1 + 1, top.m2));
  const double f2 = top.m2 + parabolic(mirrored(top.m1, top.m2 - 1), top.v, mirrored(top.m1, top.m2 + 1));

  const double dx1 = n1 > 1 ? (grid.x1_max - grid.x1_min) / (n1 - 1) : 1.0;
  const double dx2 = n2 > 1 ? (grid.x2_max - grid.x2_min) / (n2 - 1) : 1.0;
  const double k1 = 2.0 * kPi * f1 / (p1 * dx1);
  const double k2 = 2.0 * kPi * f2 / (p2 * dx2);
  double angle = rad_to_deg(std::atan2(k2, k1));
  if (angle > 90.0) angle -= 180.0;
  if (angle <= -90.0) angle += 180.0;
  res.angle_deg = angle;
  res.wavelength = 2.0 * kPi / std::hypot(k1, k2);
  return res;
}

WaveDirection dominant_wave_direction(const FieldMap& map, int padding) {
  std::vector<double> re(map.u.size());
  for (std::size_t c = 0; c < re.size(); ++c) re[c] = map.masked[c] ? 0.0 : map.u[c](0).real();
  return dominant_wave_direction(map.grid, re, padding);
}

}  // namespace flutter
