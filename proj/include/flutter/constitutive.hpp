#pragma once

#include <array>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace flutter {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Anisotropic elasticity E = lambda B(x)B + 2 mu B[x]B, everything divided by mu.
struct ElasticLaw {
  double lambda_over_mu = 1.0;
  double b_hat_deg = 80.0;        ///< anisotropy strength, in (0, 90) degrees
  double theta_sigma_deg = 0.0;   ///< inclination of the symmetry axis b to k1 (clockwise)
};

struct PlasticLaw {
  double H_over_mu = 1.0;
  double psi_deg = 30.0;   ///< pressure sensitivity (yield normal Q)
  double chi_deg = 0.0;    ///< dilatancy (flow direction P)
};

/// Unit deviatoric stress direction in the principal frame {k1, k2, k3}.
struct StressDirection {
  double theta_L_deg = 0.0;
  std::array<double, 3> dev_hat{0.81649658092772603, -0.40824829046386302, -0.40824829046386302};
};

struct MaterialState {
  ElasticLaw elastic;
  PlasticLaw plastic;
  StressDirection stress;
  double dev_magnitude_over_mu = 0.0;  ///< |dev T| / mu
  double mean_stress_over_mu = 0.0;    ///< tr T / (3 mu)
};

/// The four parameter sets used for the flutter maps: lambda/mu = 1, b_hat = 80,
/// psi = 30, chi = 0 and (theta_L, theta_sigma) = (0,15), (30,30), (0,45), (0,60).
MaterialState reference_case(int case_number, double H_over_mu = 1.0);

/// Throws ConfigError when lambda/mu, b_hat or the stress direction are outside their domain.
void validate(const MaterialState& state);

/// Eigenvalues b1 = sqrt(3) cos b_hat, b2 = sqrt(3/2) sin b_hat.
std::pair<double, double> anisotropy_eigenvalues(double b_hat_deg);

/// B = b1 b(x)b + b2 (I - b(x)b); throws std::domain_error for b_hat outside (0, 90).
Mat3 build_B(const ElasticLaw& elastic);

StressDirection dev_direction_from_lode(double theta_L_deg);

/// Modified Lode angle of a unit deviator, sgn(0) = 1.
double lode_from_dev(const std::array<double, 3>& dev_hat);

/// Flow direction P and yield normal Q (both diagonal in the principal frame).
std::pair<Mat3, Mat3> build_PQ(const StressDirection& stress, const PlasticLaw& plastic);

/// E[X]/mu = (lambda/mu)(B.X) B + 2 B X B.
Mat3 apply_elastic_tensor(const ElasticLaw& elastic, const Mat3& X);
Mat3 apply_elastic_tensor(double lambda_over_mu, const Mat3& B, const Mat3& X);

/// Cauchy stress over mu assembled from the optional magnitudes.
Mat3 stress_over_mu(const MaterialState& state);

/// Precomputed tensors shared by every propagation direction of one state.
struct ConstitutiveTensors {
  double lambda_over_mu = 1.0;
  double H_over_mu = 1.0;
  double b2 = 1.0;
  Mat3 B = Mat3::Identity();
  Mat3 P = Mat3::Zero();
  Mat3 Q = Mat3::Zero();
  Mat3 EP = Mat3::Zero();   ///< E[P]/mu
  Mat3 EQ = Mat3::Zero();   ///< E[Q]/mu
  Mat3 T = Mat3::Zero();    ///< Cauchy stress / mu
};

ConstitutiveTensors make_tensors(const MaterialState& state);

}  // namespace flutter
