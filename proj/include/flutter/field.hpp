#pragma once

#include <cstdint>
#include <vector>

#include "flutter/greens.hpp"

namespace flutter {

/// Two equal and opposite pulsating forces at center +- half_distance (cos beta, sin beta),
/// each directed along the dipole line.
struct Dipole {
  double beta_deg = 45.0;
  double half_distance = 1.0;
  double amplitude = 1.0;
  Vec2 center = Vec2::Zero();

  Vec2 offset() const;
  Vec2c force() const;
};

/// u(x) = G(x - x+) f - G(x - x-) f with x+- = center +- offset. Throws std::invalid_argument at
/// a force point.
Vec2c dipole_displacement(const Vec2& x_bar, const Dipole& dipole, const MaterialState& state,
                          const GreensEvalConfig& config);

struct GridSpec {
  double x1_min = -25.0;
  double x1_max = 25.0;
  double x2_min = -25.0;
  double x2_max = 25.0;
  int n1 = 512;
  int n2 = 512;
  double mask_radius = 0.2;   ///< cells this close to a force point are masked

  double x1(int i) const { return n1 == 1 ? x1_min : x1_min + (x1_max - x1_min) * i / (n1 - 1); }
  double x2(int j) const { return n2 == 1 ? x2_min : x2_min + (x2_max - x2_min) * j / (n2 - 1); }
};

/// Throws ConfigError for empty grids, inverted ranges or a negative mask radius.
void validate(const GridSpec& grid);

enum class FieldQuadrature {
  kBatched,    ///< GreensFieldEvaluator (trapezoid + logarithmic product weights)
  kAdaptive,   ///< greens_at at every cell
};

struct FieldMap {
  GridSpec grid;
  MaterialState state;
  GreensEvalConfig config;
  Dipole dipole;
  std::vector<Vec2c> u;               ///< cell (i, j) at index j * n1 + i
  std::vector<std::uint8_t> masked;   ///< 1 where the cell is excluded
  int angular_nodes = 0;              ///< batched evaluator resolution (0 for adaptive)

  std::size_t index(int i, int j) const { return std::size_t(j) * grid.n1 + i; }
};

FieldMap sample_grid(const Dipole& dipole, const MaterialState& state,
                     const GreensEvalConfig& config, const GridSpec& grid,
                     FieldQuadrature method = FieldQuadrature::kBatched);

struct WaveDirection {
  double angle_deg = 0.0;    ///< orientation of the wave vector, in (-90, 90]
  double wavelength = 0.0;   ///< in units of a
  double runner_up_ratio = 0.0;   ///< second distinct spectral peak over the main one
};

/// Strongest plane-wave component of a real scalar field sampled on `grid` (index j * n1 + i),
/// from the zero-padded, Hann-windowed 2D spectrum with the zero-frequency bin excluded and
/// parabolic peak interpolation. Throws NumericalError when a second distinct peak reaches 99%
/// of the main one (indeterminate), std::invalid_argument for grids below 128 x 128 or a zero field.
WaveDirection dominant_wave_direction(const GridSpec& grid, const std::vector<double>& field,
                                      int padding = 4);

/// Same, applied to Re(u1) of a field map (masked cells set to zero).
WaveDirection dominant_wave_direction(const FieldMap& map, int padding = 4);

}  // namespace flutter
