#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "flutter/acoustic.hpp"
#include "flutter/constitutive.hpp"

namespace flutter {

struct GreensEvalConfig {
  double omega_bar = 1.0;
  double quad_rel_tol = 1e-8;
  int quad_max_subdiv = 4000;
  double defective_perturb = 1e-6;
};

/// Throws ConfigError unless omega_bar > 0 and quad_rel_tol lies in (0, 1e-2].
void validate(const GreensEvalConfig& config);

struct GreensTensor {
  Mat2c g = Mat2c::Zero();
  Vec2 point = Vec2::Zero();
  int defective_directions = 0;   ///< sweep samples that needed the H perturbation
};

/// Plane-wave sum of the integrand at one propagation direction n (angle phi_deg):
///   sum_N bracket(k_N xi) v_N (x) w_N / c_N^2,  k_N = omega_bar / c_N,  Re c_N > 0.
/// Falls back to H(1 + defective_perturb) when the acoustic tensor is defective there.
/// Throws NumericalError if some c_N^2 vanishes.
Mat2c direction_kernel(double phi_deg, double xi, const ConstitutiveTensors& t,
                       const ConstitutiveTensors& t_perturbed, double omega_bar,
                       bool* used_perturbation = nullptr);

/// Dimensionless Green's tensor at x_bar (nonzero): -(1/4 pi^2) int_0^pi of the kernel at
/// xi = r|cos alpha| over directions alpha + theta, with adaptive Gauss-Kronrod quadrature that
/// splits at the logarithmic point alpha = pi/2.
GreensTensor greens_at(const Vec2& x_bar, const MaterialState& state,
                       const GreensEvalConfig& config);

struct ProfileSample {
  double r = 0.0;
  Mat2c g = Mat2c::Zero();
};

/// Samples along the ray at angle theta_deg, r evenly spaced in [r_min, r_max] (r_min > 0).
std::vector<ProfileSample> greens_radial_profile(double theta_deg, double r_min, double r_max,
                                                 int n_samples, const MaterialState& state,
                                                 const GreensEvalConfig& config);

/// Independent check of the Green's tensor by direct Fourier inversion of
/// [A(n)|xi|^2 - omega^2 (1 + i epsilon)]^{-1}, computed in polar wavenumber coordinates.
/// `grid_points` angular nodes (graded toward the direction n . x = 0) are used on [0, pi);
/// the radial integral is done with graded Gauss panels on [0, grid_half_extent] (which is raised
/// above the largest pole radius when needed) plus contour-rotated tails.
/// Uses the adjugate inverse only: no eigenvectors, no special functions.
/// Throws NumericalError if the operator matrix is singular at a node.
GreensTensor fourier_oracle_greens(const Vec2& x_bar, const MaterialState& state,
                                   const GreensEvalConfig& config, double epsilon,
                                   double grid_half_extent, int grid_points);

/// Fast evaluation of G(x) f for many points sharing a material state and a force vector.
///
/// The angular integral is rewritten over the absolute direction phi in [0, pi) and sampled on
/// a uniform grid. With z = k r |cos(phi - theta)| the kernel splits as
///   2 cos z (ln k + ln r) + E(z) + 2 cos z ln|cos(phi - theta)|,
/// E entire and even, so the first part is integrated by the trapezoid rule and the last by
/// product weights for the periodic logarithm. Both parts are tabulated per direction in
/// s = r |cos(phi - theta)| and interpolated with cubic Lagrange stencils.
class GreensFieldEvaluator {
 public:
  /// `r_max`: largest |x| that will be queried. `angular_nodes` <= 0 picks a count from the
  /// largest |k_N| r_max.
  GreensFieldEvaluator(const MaterialState& state, const GreensEvalConfig& config,
                       const Vec2c& force, double r_max, int angular_nodes = 0);

  /// G(x) f. Throws std::invalid_argument for x = 0 or |x| > r_max.
  Vec2c apply(const Vec2& x) const;

  int angular_nodes() const { return n_; }
  double max_wavenumber() const { return k_max_; }

 private:
  double log_weight(double delta) const;

  int n_ = 0;
  double r_max_ = 0.0;
  double ds_ = 0.0;
  int ns_ = 0;
  double k_max_ = 0.0;
  std::vector<double> phi_;
  std::vector<Vec2> dir_;
  // Per node j and table index m: smooth part (2 cos(k s) ln k + E(k s)) M f and the
  // coefficient of the logarithms 2 cos(k s) M f, each a 2-vector.
  std::vector<Vec2c> smooth_;
  std::vector<Vec2c> logcoef_;
  std::vector<double> weight_table_;
  double weight_step_ = 0.0;
};

}  // namespace flutter
