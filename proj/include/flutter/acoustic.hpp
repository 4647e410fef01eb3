#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "flutter/constitutive.hpp"

namespace flutter {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

/// In-plane unit normal inclined at theta_n (degrees, counter-clockwise from k1).
Vec2 direction(double theta_n_deg);

/// In-plane components of the elastic acoustic tensor over mu, in the {n, s} frame (s = k3 x n).
struct ElasticComponents {
  double A_nn = 0.0;
  double A_ss = 0.0;
  double A_ns = 0.0;
};

ElasticComponents elastic_acoustic_components(const Vec2& n, const MaterialState& state);
ElasticComponents elastic_acoustic_components(const Vec2& n, const ConstitutiveTensors& t);

/// Nondimensional elastoplastic acoustic tensor rho A / mu in the {k1, k2} basis.
struct AcousticTensor {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double a33 = 0.0;
  double theta_n_deg = 0.0;

  Mat2 in_plane() const {
    Mat2 m;
    m << a11, a12, a21, a22;
    return m;
  }
};

/// Throws NumericalError if the out-of-plane entry a33 is not positive.
AcousticTensor build_acoustic(const Vec2& n, const MaterialState& state);
AcousticTensor build_acoustic(const Vec2& n, const ConstitutiveTensors& t);

/// Same in-plane block, expressed in the {n, s} frame.
Mat2 acoustic_ns_frame(const Vec2& n, const ConstitutiveTensors& t);

/// Relative threshold |Delta| / (|a11| + |a22|) below which the tensor is treated as defective.
inline constexpr double kDefectiveTol = 1e-8;

/// Eigenpairs of a nonsymmetric 2x2 tensor. c1_sq is the "+Delta" branch, Delta being the
/// principal square root of the (real) discriminant. v_i are right and w_i left eigenvectors,
/// normalized so that v_i . w_j = delta_ij. When `defective` is set the vectors are zero.
struct Spectrum {
  cplx c1_sq;
  cplx c2_sq;
  cplx delta;
  Vec2c v1 = Vec2c::Zero();
  Vec2c v2 = Vec2c::Zero();
  Vec2c w1 = Vec2c::Zero();
  Vec2c w2 = Vec2c::Zero();
  bool defective = false;
};

Spectrum spectrum(const Mat2& A);
inline Spectrum spectrum(const AcousticTensor& A) { return spectrum(A.in_plane()); }

/// sum_N f_N v_N (x) w_N, the matrix with the same eigenvectors and eigenvalues f_N.
Mat2c spectral_sum(const Spectrum& s, cplx f1, cplx f2);

/// Closed-form inverse of a 2x2 tensor (adjugate over determinant).
Mat2 closed_form_inverse(const Mat2& A);

struct FlutterIndicators {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;
  double f5 = 0.0;
  double e = 0.0;
  bool e_defined = true;   ///< false when A_nn = A_ss (then flutter comes from the discriminant)
  bool flutter = false;
  double discriminant_sq = 0.0;   ///< (a11 - a22)^2 + 4 a12 a21 of the assembled tensor
};

FlutterIndicators flutter_indicators(const Vec2& n, const MaterialState& state);
FlutterIndicators flutter_indicators(const Vec2& n, const ConstitutiveTensors& t);

/// Evaluates the three inequalities for given elastic components and f1..f3.
/// Exposed so that the selfcheck battery can inject faults into the inputs.
FlutterIndicators flutter_from_components(const ElasticComponents& el, double f1, double f2,
                                          double f3, double H_over_mu);

/// f1, f2, f3 for direction n.
std::array<double, 3> plastic_products(const Vec2& n, const ConstitutiveTensors& t);

struct ScanAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;   ///< number of samples, endpoints included when steps > 1

  double at(int i) const { return steps <= 1 ? min : min + (max - min) * i / (steps - 1); }
};

struct FlutterMask {
  ScanAxis H_axis;
  ScanAxis theta_axis;
  std::vector<std::uint8_t> cells;   ///< row-major, H index outer

  bool empty() const { return cells.empty(); }
  bool at(int iH, int itheta) const { return cells[std::size_t(iH) * theta_axis.steps + itheta] != 0; }
};

/// Flutter mask in the (H/mu, theta_n) plane. The H of `state_template` is overridden.
FlutterMask flutter_region_scan(const MaterialState& state_template, const ScanAxis& H_axis,
                                const ScanAxis& theta_axis);

/// 4-connected flutter region of a mask, described by its bounding extrema.
struct FlutterRegion {
  double H_min = 0.0;
  double H_max = 0.0;
  double theta_min_deg = 0.0;
  double theta_max_deg = 0.0;
  std::size_t cells = 0;
};

std::vector<FlutterRegion> connected_regions(const FlutterMask& mask);

/// Interval of propagation angles (degrees) inside which flutter occurs, at fixed H.
struct AngleInterval {
  double lo_deg = 0.0;
  double hi_deg = 0.0;
  double mid() const { return 0.5 * (lo_deg + hi_deg); }
};

/// Flutter fans over theta_n in [-90, 90), edges refined by bisection on the discriminant.
std::vector<AngleInterval> flutter_fans(const MaterialState& state, double resolution_deg = 0.05);

struct PdThreshold {
  bool lost = false;
  double H_cr = 0.0;
};

/// Smallest eigenvalue of the symmetric part of E/mu - E[P](x)E[Q]/(H mu^2) over symmetric
/// second-order tensors (6x6 in an orthonormal basis).
double pd_min_eigenvalue(const MaterialState& state);

/// Loss of positive definiteness, by bisection on 1/H. `H_floor` bounds the search from below.
PdThreshold pd_threshold(const MaterialState& state_template, double H_floor = 1e-6,
                         double tol = 1e-6);

struct EllipticityThreshold {
  bool lost = false;
  double H_cr = 0.0;
  double theta_nE_deg = 0.0;
};

/// Positive root H(theta_n) of det(in-plane block) = 0, or a negative value when none exists.
double ellipticity_root(const Vec2& n, const ConstitutiveTensors& t);

EllipticityThreshold ellipticity_threshold(const MaterialState& state_template,
                                           double resolution_deg = 0.05);

}  // namespace flutter
