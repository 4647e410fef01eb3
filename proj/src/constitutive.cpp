#include "flutter/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

Mat3 diag(const std::array<double, 3>& d) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = d[0];
  m(1, 1) = d[1];
  m(2, 2) = d[2];
  return m;
}

}  // namespace

MaterialState reference_case(int case_number, double H_over_mu) {
  double theta_L = 0.0;
  double theta_sigma = 0.0;
  switch (case_number) {
    case 1: theta_L = 0.0; theta_sigma = 15.0; break;
    case 2: theta_L = 30.0; theta_sigma = 30.0; break;
    case 3: theta_L = 0.0; theta_sigma = 45.0; break;
    case 4: theta_L = 0.0; theta_sigma = 60.0; break;
    default: throw ConfigError("reference case must be 1..4, got " + std::to_string(case_number));
  }
  MaterialState s;
  s.elastic = {1.0, 80.0, theta_sigma};
  s.plastic = {H_over_mu, 30.0, 0.0};
  s.stress = dev_direction_from_lode(theta_L);
  return s;
}

void validate(const MaterialState& state) {
  const auto& el = state.elastic;
  if (!(el.b_hat_deg > 0.0 && el.b_hat_deg < 90.0)) {
    throw ConfigError("b_hat must lie in (0, 90) degrees, got " + std::to_string(el.b_hat_deg));
  }
  if (!(3.0 * el.lambda_over_mu + 2.0 > 0.0)) {
    throw ConfigError("3 lambda/mu + 2 must be positive");
  }
  if (!(state.stress.theta_L_deg >= -180.0 && state.stress.theta_L_deg <= 180.0)) {
    throw ConfigError("theta_L must lie in [-180, 180] degrees");
  }
  const auto& d = state.stress.dev_hat;
  const double sum = d[0] + d[1] + d[2];
  const double norm2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
  if (std::abs(sum) > 1e-9 || std::abs(norm2 - 1.0) > 1e-9) {
    throw ConfigError("dev_hat must be a unit deviator");
  }
  if (!std::isfinite(state.plastic.H_over_mu) || !std::isfinite(state.plastic.psi_deg) ||
      !std::isfinite(state.plastic.chi_deg)) {
    throw ConfigError("plastic parameters must be finite");
  }
}

std::pair<double, double> anisotropy_eigenvalues(double b_hat_deg) {
  if (!(b_hat_deg > 0.0 && b_hat_deg < 90.0)) {
    throw std::domain_error("b_hat must lie in (0, 90) degrees");
  }
  const double b = deg_to_rad(b_hat_deg);
  return {kSqrt3 * std::cos(b), std::sqrt(1.5) * std::sin(b)};
}

Mat3 build_B(const ElasticLaw& elastic) {
  const auto [b1, b2] = anisotropy_eigenvalues(elastic.b_hat_deg);
  const double ts = deg_to_rad(elastic.theta_sigma_deg);
  const Vec3 b(std::cos(ts), -std::sin(ts), 0.0);
  const Mat3 bb = b * b.transpose();
  return b1 * bb + b2 * (Mat3::Identity() - bb);
}

StressDirection dev_direction_from_lode(double theta_L_deg) {
  if (!(theta_L_deg >= -180.0 && theta_L_deg <= 180.0)) {
    throw ConfigError("theta_L must lie in [-180, 180] degrees");
  }
  const double t = deg_to_rad(theta_L_deg);
  const double third = 2.0 * std::numbers::pi / 3.0;
  const double s = std::sqrt(2.0 / 3.0);
  return {theta_L_deg, {s * std::cos(t), s * std::cos(t - third), s * std::cos(t + third)}};
}

double lode_from_dev(const std::array<double, 3>& dev_hat) {
  const double c = std::sqrt(1.5) * dev_hat[0];
  const double s = (dev_hat[1] - dev_hat[2]) / std::sqrt(2.0);
  const double t = rad_to_deg(std::atan2(s, c));
  return t == -180.0 ? 180.0 : t;
}

std::pair<Mat3, Mat3> build_PQ(const StressDirection& stress, const PlasticLaw& plastic) {
  const Mat3 dev = diag(stress.dev_hat);
  const double chi = deg_to_rad(plastic.chi_deg);
  const double psi = deg_to_rad(plastic.psi_deg);
  Mat3 P = std::cos(chi) * dev + (std::sin(chi) / kSqrt3) * Mat3::Identity();
  Mat3 Q = std::cos(psi) * dev + (std::sin(psi) / kSqrt3) * Mat3::Identity();
  return {P, Q};
}

Mat3 apply_elastic_tensor(double lambda_over_mu, const Mat3& B, const Mat3& X) {
  return lambda_over_mu * (B.cwiseProduct(X).sum()) * B + 2.0 * B * X * B;
}

Mat3 apply_elastic_tensor(const ElasticLaw& elastic, const Mat3& X) {
  return apply_elastic_tensor(elastic.lambda_over_mu, build_B(elastic), X);
}

Mat3 stress_over_mu(const MaterialState& state) {
  return state.dev_magnitude_over_mu * diag(state.stress.dev_hat) +
         state.mean_stress_over_mu * Mat3::Identity();
}

ConstitutiveTensors make_tensors(const MaterialState& state) {
  validate(state);
  ConstitutiveTensors t;
  t.lambda_over_mu = state.elastic.lambda_over_mu;
  t.H_over_mu = state.plastic.H_over_mu;
  t.b2 = anisotropy_eigenvalues(state.elastic.b_hat_deg).second;
  t.B = build_B(state.elastic);
  std::tie(t.P, t.Q) = build_PQ(state.stress, state.plastic);
  t.EP = apply_elastic_tensor(t.lambda_over_mu, t.B, t.P);
  t.EQ = apply_elastic_tensor(t.lambda_over_mu, t.B, t.Q);
  t.T = stress_over_mu(state);
  return t;
}

}  // namespace flutter
