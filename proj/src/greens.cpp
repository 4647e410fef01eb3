#include "flutter/greens.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "flutter/errors.hpp"
#include "flutter/quadrature.hpp"
#include "flutter/specfun.hpp"

namespace flutter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

struct Branch {
  cplx c_sq;
  cplx k;
  Vec2c v;
  Vec2c w;
};

ConstitutiveTensors perturbed(const MaterialState& state, double rel) {
  MaterialState p = state;
  p.plastic.H_over_mu *= 1.0 + rel;
  return make_tensors(p);
}

/// Both eigen-branches at direction n, with the one-sided H perturbation for defective tensors.
std::array<Branch, 2> branches(const Vec2& n, const ConstitutiveTensors& t,
                               const ConstitutiveTensors& tp, double omega_bar, bool* used) {
  Spectrum sp = spectrum(build_acoustic(n, t));
  if (sp.defective) {
    sp = spectrum(build_acoustic(n, tp));
    if (used) *used = true;
    if (sp.defective) throw NumericalError("acoustic tensor stays defective after H perturbation");
  }
  std::array<Branch, 2> out;
  const cplx cs[2] = {sp.c1_sq, sp.c2_sq};
  const Vec2c* vs[2] = {&sp.v1, &sp.v2};
  const Vec2c* ws[2] = {&sp.w1, &sp.w2};
  for (int i = 0; i < 2; ++i) {
    if (cs[i] == 0.0) throw NumericalError("vanishing squared wave speed along the sweep");
    const cplx c = std::sqrt(cs[i]);
    if (!(c.real() > 0.0)) {
      throw NumericalError("negative real squared wave speed (ellipticity lost) along the sweep");
    }
    out[i] = {cs[i], omega_bar / c, *vs[i], *ws[i]};
  }
  return out;
}

}  // namespace

void validate(const GreensEvalConfig& config) {
  if (!(config.omega_bar > 0.0) || !std::isfinite(config.omega_bar)) {
    throw ConfigError("omega_bar must be positive");
  }
  if (!(config.quad_rel_tol > 0.0 && config.quad_rel_tol <= 1e-2)) {
    throw ConfigError("quad_rel_tol must lie in (0, 1e-2]");
  }
  if (config.quad_max_subdiv < 1) throw ConfigError("quad_max_subdiv must be positive");
  if (!(config.defective_perturb > 0.0)) throw ConfigError("defective_perturb must be positive");
}

Mat2c direction_kernel(double phi_deg, double xi, const ConstitutiveTensors& t,
                       const ConstitutiveTensors& t_perturbed, double omega_bar,
                       bool* used_perturbation) {
  const auto br = branches(direction(phi_deg), t, t_perturbed, omega_bar, used_perturbation);
  Mat2c out = Mat2c::Zero();
  for (const auto& b : br) {
    out += (planewave_bracket(xi, b.k) / b.c_sq) * (b.v * b.w.transpose());
  }
  return out;
}

GreensTensor greens_at(const Vec2& x_bar, const MaterialState& state,
                       const GreensEvalConfig& config) {
  validate(config);
  const double r = x_bar.norm();
  if (!(r > 0.0)) throw std::invalid_argument("greens_at: x_bar must be nonzero");
  const double theta = std::atan2(x_bar.y(), x_bar.x());
  const ConstitutiveTensors t = make_tensors(state);
  const ConstitutiveTensors tp = perturbed(state, config.defective_perturb);

  int defective = 0;
  QuadIntegrand f = [&](double alpha, std::span<cplx> out) {
    bool used = false;
    const Mat2c k = direction_kernel(rad_to_deg(alpha + theta), r * std::abs(std::cos(alpha)), t,
                                     tp, config.omega_bar, &used);
    if (used) ++defective;
    out[0] = k(0, 0);
    out[1] = k(0, 1);
    out[2] = k(1, 0);
    out[3] = k(1, 1);
  };
  const std::array<double, 3> breaks{0.0, kPi / 2.0, kPi};
  QuadOptions opts;
  opts.rel_tol = config.quad_rel_tol;
  opts.max_subdiv = config.quad_max_subdiv;
  opts.min_rel_width = 1e-12;
  const QuadResult q = integrate_adaptive(f, 4, breaks, opts);

  GreensTensor g;
  g.point = x_bar;
  g.defective_directions = defective;
  const double scale = -1.0 / (4.0 * kPi * kPi);
  g.g << q.value[0], q.value[1], q.value[2], q.value[3];
  g.g *= scale;
  return g;
}

std::vector<ProfileSample> greens_radial_profile(double theta_deg, double r_min, double r_max,
                                                 int n_samples, const MaterialState& state,
                                                 const GreensEvalConfig& config) {
  if (!(r_min > 0.0)) throw std::invalid_argument("radial profile: r_min must be positive");
  if (r_max < r_min) throw std::invalid_argument("radial profile: r_max below r_min");
  if (n_samples < 1) throw std::invalid_argument("radial profile: need at least one sample");
  const Vec2 e = direction(theta_deg);
  std::vector<ProfileSample> out(n_samples);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_samples; ++i) {
    const double r = n_samples == 1 ? r_min : r_min + (r_max - r_min) * i / (n_samples - 1);
    out[i] = {r, greens_at(r * e, state, config).g};
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Fourier oracle

namespace {

struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss20() {
  static const GaussRule rule = [] {
    GaussRule g;
    gauss_legendre(20, g.x, g.w);
    return g;
  }();
  return rule;
}

Mat2c resolvent(const Mat2& A, cplx rho, cplx w2) {
  Mat2c m;
  const cplx r2 = rho * rho;
  m << A(0, 0) * r2 - w2, A(0, 1) * r2, A(1, 0) * r2, A(1, 1) * r2 - w2;
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (std::abs(det) == 0.0) throw NumericalError("Fourier oracle: singular operator at a node");
  Mat2c adj;
  adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return adj / det;
}

/// int_0^inf rho M(rho) (e^{i rho s} + e^{-i rho s}) d rho for one direction.
Mat2c radial_integral(const Mat2& A, double s, cplx w2, double R_floor) {
  const GaussRule& g = gauss20();
  const double as = std::abs(s);

  // Pole radii rho^2 = w2 / c^2 from the eigenvalues of A (only their location is used).
  const double tr = A.trace();
  const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  const cplx disc = std::sqrt(cplx(tr * tr - 4.0 * det, 0.0));
  std::vector<std::pair<double, double>> poles;   // (Re rho, |Im rho|)
  double rmax_pole = 0.0;
  for (const cplx c2 : {0.5 * (tr + disc), 0.5 * (tr - disc)}) {
    const cplx rho = std::sqrt(w2 / c2);
    const cplx rr = rho.real() >= 0.0 ? rho : -rho;
    poles.emplace_back(rr.real(), std::abs(rr.imag()));
    rmax_pole = std::max(rmax_pole, std::abs(rr));
  }
  const double R = std::max(R_floor, 2.0 * rmax_pole + 4.0);
  const double h = std::min(0.25, as > 0.0 ? 1.0 / as : 0.25);

  std::vector<double> bp;
  const int nb = int(std::ceil(R / h));
  for (int i = 0; i <= nb; ++i) bp.push_back(R * i / nb);
  for (const auto& [re, im] : poles) {
    if (re <= 0.0 || re >= R) continue;
    bp.push_back(re);
    for (double d = std::max(im / 4.0, 1e-9); d < h; d *= 2.0) {
      if (re - d > 0.0) bp.push_back(re - d);
      if (re + d < R) bp.push_back(re + d);
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  Mat2c sum = Mat2c::Zero();
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double a = bp[p], b = bp[p + 1];
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double rho = c + hw * g.x[i];
      sum += (hw * g.w[i] * rho * 2.0 * std::cos(rho * s)) * resolvent(A, rho, w2);
    }
  }

  // Tails beyond R on the rays rho = R +- i t, where e^{+-i rho |s|} decay like e^{-t |s|}.
  const double decay = std::max(as, 1e-300);
  const double t_end = std::max(40.0 / decay, 4.0 * R);
  const double cap = std::max(2.0 / decay, 0.5);
  std::vector<double> tb{0.0};
  double width = 0.25;
  while (tb.back() < t_end) {
    tb.push_back(tb.back() + width);
    width = std::min(width * 1.5, cap);
  }
  for (std::size_t p = 0; p + 1 < tb.size(); ++p) {
    const double a = tb[p], b = tb[p + 1];
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double t = c + hw * g.x[i];
      const double wt = hw * g.w[i] * std::exp(-t * as);
      const cplx up = R + kI * t;
      const cplx dn = R - kI * t;
      sum += (wt * kI * up * std::exp(kI * R * as)) * resolvent(A, up, w2);
      sum += (-wt * kI * dn * std::exp(-kI * R * as)) * resolvent(A, dn, w2);
    }
  }
  return sum;
}

}  // namespace

GreensTensor fourier_oracle_greens(const Vec2& x_bar, const MaterialState& state,
                                   const GreensEvalConfig& config, double epsilon,
                                   double grid_half_extent, int grid_points) {
  validate(config);
  if (!(epsilon > 0.0)) throw std::invalid_argument("Fourier oracle: epsilon must be positive");
  if (grid_points < 8) throw std::invalid_argument("Fourier oracle: need at least 8 angular nodes");
  const double r = x_bar.norm();
  if (!(r > 0.0)) throw std::invalid_argument("Fourier oracle: x_bar must be nonzero");
  const double theta = std::atan2(x_bar.y(), x_bar.x());
  const ConstitutiveTensors t = make_tensors(state);
  const cplx w2 = config.omega_bar * config.omega_bar * cplx(1.0, epsilon);

  // phi = phi_s + pi w(u) with w(u) = u^3 / (u^3 + (1-u)^3): nodes crowd toward the direction
  // n . x = 0, where the radial integral has a logarithmic singularity.
  const double phi_s = theta + kPi / 2.0;
  Mat2c total = Mat2c::Zero();
#pragma omp parallel
  {
    Mat2c local = Mat2c::Zero();
#pragma omp for schedule(dynamic)
    for (int j = 0; j < grid_points; ++j) {
      const double u = (j + 0.5) / grid_points;
      const double u3 = u * u * u, v3 = (1.0 - u) * (1.0 - u) * (1.0 - u);
      const double den = u3 + v3;
      const double wu = u3 / den;
      const double dw = 3.0 * u * u * (1.0 - u) * (1.0 - u) / (den * den);
      const double phi = phi_s + kPi * wu;
      const Vec2 n(std::cos(phi), std::sin(phi));
      const Mat2 A = build_acoustic(n, t).in_plane();
      const double s = r * std::cos(phi - theta);
      local += (kPi * dw / grid_points) * radial_integral(A, s, w2, grid_half_extent);
    }
#pragma omp critical
    total += local;
  }
  GreensTensor g;
  g.point = x_bar;
  g.g = total / (4.0 * kPi * kPi);
  return g;
}

// ---------------------------------------------------------------------------------------------
// Batched evaluator

GreensFieldEvaluator::GreensFieldEvaluator(const MaterialState& state,
                                           const GreensEvalConfig& config, const Vec2c& force,
                                           double r_max, int angular_nodes)
    : r_max_(r_max) {
  validate(config);
  if (!(r_max > 0.0)) throw std::invalid_argument("GreensFieldEvaluator: r_max must be positive");
  const ConstitutiveTensors t = make_tensors(state);
  const ConstitutiveTensors tp = perturbed(state, config.defective_perturb);
  const double omega = config.omega_bar;

  for (int j = 0; j < 720; ++j) {
    const double phi = kPi * j / 720.0;
    for (const auto& b : branches({std::cos(phi), std::sin(phi)}, t, tp, omega, nullptr)) {
      k_max_ = std::max(k_max_, std::abs(b.k));
    }
  }
  if (angular_nodes <= 0) {
    const int want = int(std::ceil(2.0 * k_max_ * r_max + 96.0));
    angular_nodes = std::max(256, 32 * ((want + 31) / 32));
  }
  if (angular_nodes % 2 != 0) ++angular_nodes;
  n_ = angular_nodes;

  ds_ = std::min(0.02, 0.05 / k_max_);
  ns_ = int(std::ceil(r_max / ds_)) + 4;

  phi_.resize(n_);
  dir_.resize(n_);
  smooth_.assign(std::size_t(n_) * ns_, Vec2c::Zero());
  logcoef_.assign(std::size_t(n_) * ns_, Vec2c::Zero());

  std::vector<std::array<Branch, 2>> node_branches(n_);
  for (int j = 0; j < n_; ++j) {
    phi_[j] = kPi * j / n_;
    dir_[j] = {std::cos(phi_[j]), std::sin(phi_[j])};
    node_branches[j] = branches(dir_[j], t, tp, omega, nullptr);
  }

#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n_; ++j) {
    for (const auto& b : node_branches[j]) {
      const Vec2c mf = (b.v * b.w.transpose() * force) / b.c_sq;
      const cplx lnk = std::log(b.k);
      for (int m = 0; m < ns_; ++m) {
        const cplx z = b.k * (m * ds_);
        const cplx two_cos = 2.0 * std::cos(z);
        const std::size_t idx = std::size_t(j) * ns_ + m;
        smooth_[idx] += (two_cos * lnk + planewave_bracket_regular(z)) * mf;
        logcoef_[idx] += two_cos * mf;
      }
    }
  }

  // Product weights for int_0^pi ln|cos(phi - theta)| C(phi) d phi against the trigonometric
  // interpolant of C on the nodes, as a function of delta = theta - phi_j (period pi).
  constexpr int kPerNode = 16;
  const int nw = kPerNode * n_;
  weight_step_ = kPi / nw;
  weight_table_.resize(nw);
  const int half = n_ / 2;
  for (int i = 0; i < nw; ++i) {
    const double delta = i * weight_step_;
    double acc = -kPi * std::log(2.0);
    for (int m = 1; m <= half; ++m) {
      const double term = kPi * std::cos(2.0 * m * delta) / m;
      acc -= (m % 2 == 0 ? 1.0 : -1.0) * (m == half ? 0.5 : 1.0) * term;
    }
    weight_table_[i] = acc / n_;
  }
}

double GreensFieldEvaluator::log_weight(double delta) const {
  const int nw = int(weight_table_.size());
  double pos = delta / weight_step_;
  pos -= nw * std::floor(pos / nw);
  const int i1 = int(pos);
  const double f = pos - i1;
  const auto at = [&](int i) { return weight_table_[((i % nw) + nw) % nw]; };
  const double y0 = at(i1 - 1), y1 = at(i1), y2 = at(i1 + 1), y3 = at(i1 + 2);
  return y1 + 0.5 * f * (y2 - y0 + f * (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3 + f * (3.0 * (y1 - y2) + y3 - y0)));
}

Vec2c GreensFieldEvaluator::apply(const Vec2& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw std::invalid_argument("GreensFieldEvaluator: x must be nonzero");
  if (r > r_max_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("GreensFieldEvaluator: |x| = " + std::to_string(r) +
                                " exceeds the tabulated range " + std::to_string(r_max_));
  }
  const double theta = std::atan2(x.y(), x.x());
  const Vec2 e = x / r;
  const double lnr = std::log(r);
  const double trap = kPi / n_;
  Vec2c total = Vec2c::Zero();
  for (int j = 0; j < n_; ++j) {
    const double s = r * std::abs(e.dot(dir_[j]));
    const double pos = s / ds_;
    int m = std::max(1, int(pos));
    m = std::min(m, ns_ - 3);
    const double f = pos - m;
    // Cubic Lagrange through m-1 .. m+2.
    const double l0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double l1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    const double l2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
    const double l3 = (f + 1.0) * f * (f - 1.0) / 6.0;
    const std::size_t base = std::size_t(j) * ns_ + (m - 1);
    const Vec2c a = l0 * smooth_[base] + l1 * smooth_[base + 1] + l2 * smooth_[base + 2] +
                    l3 * smooth_[base + 3];
    const Vec2c c = l0 * logcoef_[base] + l1 * logcoef_[base + 1] + l2 * logcoef_[base + 2] +
                    l3 * logcoef_[base + 3];
    total += trap * (a + lnr * c) + log_weight(theta - phi_[j]) * c;
  }
  return total * (-1.0 / (4.0 * kPi * kPi));
}

}  // namespace flutter
