#include "flutter/acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

Vec3 lift(const Vec2& v) { return {v.x(), v.y(), 0.0}; }

Vec3 in_plane_normal(const Vec2& n) { return {-n.y(), n.x(), 0.0}; }

Eigen::Matrix3d acoustic_3d(const Vec2& n2, const ConstitutiveTensors& t) {
  const Vec3 n = lift(n2);
  const Vec3 Bn = t.B * n;
  const double nBn = n.dot(Bn);
  const double nTn = n.dot(t.T * n);
  Eigen::Matrix3d A = (t.lambda_over_mu + 1.0) * Bn * Bn.transpose() + nBn * t.B +
                      nTn * Eigen::Matrix3d::Identity();
  const Vec3 p = t.EP * n;
  const Vec3 q = t.EQ * n;
  A -= (p * q.transpose()) / t.H_over_mu;
  return A;
}

double discriminant(const Mat2& A) {
  const double d = A(0, 0) - A(1, 1);
  return d * d + 4.0 * A(0, 1) * A(1, 0);
}

/// Discriminant of the in-plane block as a function of H, from elastic components and f1..f3.
double discriminant_from_products(const ElasticComponents& el, double f1, double f2, double f3,
                                  double H) {
  const double h = 1.0 / H;
  const double d = el.A_nn - el.A_ss - (f1 + f2) * h;
  return d * d + 4.0 * (el.A_ns * el.A_ns - el.A_ns * f3 * h - f1 * f2 * h * h);
}

}  // namespace

Vec2 direction(double theta_n_deg) {
  const double t = deg_to_rad(theta_n_deg);
  return {std::cos(t), std::sin(t)};
}

ElasticComponents elastic_acoustic_components(const Vec2& n2, const ConstitutiveTensors& t) {
  const Vec3 n = lift(n2);
  const Vec3 s = in_plane_normal(n2);
  const Vec3 Bn = t.B * n;
  const double nBn = n.dot(Bn);
  const double sBn = s.dot(Bn);
  const double sBs = s.dot(t.B * s);
  const double nTn = n.dot(t.T * n);
  const double lm = t.lambda_over_mu;
  return {(lm + 2.0) * nBn * nBn + nTn, (lm + 1.0) * sBn * sBn + nBn * sBs + nTn,
          (lm + 2.0) * nBn * sBn};
}

ElasticComponents elastic_acoustic_components(const Vec2& n, const MaterialState& state) {
  return elastic_acoustic_components(n, make_tensors(state));
}

AcousticTensor build_acoustic(const Vec2& n, const ConstitutiveTensors& t) {
  const Eigen::Matrix3d A = acoustic_3d(n, t);
  AcousticTensor out{A(0, 0), A(0, 1), A(1, 0), A(1, 1), A(2, 2),
                     rad_to_deg(std::atan2(n.y(), n.x()))};
  if (!(out.a33 > 0.0)) {
    throw NumericalError("out-of-plane acoustic entry a33 must stay positive");
  }
  return out;
}

AcousticTensor build_acoustic(const Vec2& n, const MaterialState& state) {
  return build_acoustic(n, make_tensors(state));
}

Mat2 acoustic_ns_frame(const Vec2& n, const ConstitutiveTensors& t) {
  const Eigen::Matrix3d A = acoustic_3d(n, t);
  Mat2 R;
  R << n.x(), -n.y(), n.y(), n.x();
  return R.transpose() * A.topLeftCorner<2, 2>() * R;
}

Spectrum spectrum(const Mat2& A) {
  const double a11 = A(0, 0), a12 = A(0, 1), a21 = A(1, 0), a22 = A(1, 1);
  const double d = a11 - a22;
  const double disc = d * d + 4.0 * a12 * a21;
  Spectrum s;
  s.delta = disc >= 0.0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));
  s.c1_sq = 0.5 * (a11 + a22 + s.delta);
  s.c2_sq = 0.5 * (a11 + a22 - s.delta);

  if (a12 == 0.0 && a21 == 0.0) {
    // Diagonal: the "+" branch carries the larger entry.
    const Vec2c e1(1.0, 0.0), e2(0.0, 1.0);
    if (a11 >= a22) {
      s.v1 = s.w1 = e1;
      s.v2 = s.w2 = e2;
    } else {
      s.v1 = s.w1 = e2;
      s.v2 = s.w2 = e1;
    }
    return s;
  }

  const double scale = std::abs(a11) + std::abs(a22);
  if (std::abs(s.delta) < kDefectiveTol * std::max(scale, std::numeric_limits<double>::min())) {
    s.defective = true;
    return s;
  }

  const cplx D = s.delta;
  if (std::abs(a12) >= std::abs(a21)) {
    s.v1 = Vec2c(1.0, (D - d) / (2.0 * a12));
    s.v2 = Vec2c(1.0, (-D - d) / (2.0 * a12));
    s.w1 = Vec2c((D + d) / (2.0 * D), a12 / D);
    s.w2 = Vec2c((D - d) / (2.0 * D), -a12 / D);
  } else {
    s.v1 = Vec2c((D + d) / (2.0 * a21), 1.0);
    s.v2 = Vec2c((-D + d) / (2.0 * a21), 1.0);
    s.w1 = Vec2c(a21 / D, (D - d) / (2.0 * D));
    s.w2 = Vec2c(-a21 / D, (D + d) / (2.0 * D));
  }
  return s;
}

Mat2c spectral_sum(const Spectrum& s, cplx f1, cplx f2) {
  return f1 * (s.v1 * s.w1.transpose()) + f2 * (s.v2 * s.w2.transpose());
}

Mat2 closed_form_inverse(const Mat2& A) {
  const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  Mat2 adj;
  adj << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  return adj / det;
}

std::array<double, 3> plastic_products(const Vec2& n2, const ConstitutiveTensors& t) {
  const Vec3 n = lift(n2);
  const Vec3 s = in_plane_normal(n2);
  const Vec3 p = t.EP * n;
  const Vec3 q = t.EQ * n;
  const double nq = n.dot(q), np = n.dot(p), sq = s.dot(q), sp = s.dot(p);
  return {nq * np, -sq * sp, nq * sp + sq * np};
}

FlutterIndicators flutter_from_components(const ElasticComponents& el, double f1, double f2,
                                          double f3, double H_over_mu) {
  FlutterIndicators fi;
  fi.f1 = f1;
  fi.f2 = f2;
  fi.f3 = f3;
  fi.discriminant_sq = discriminant_from_products(el, f1, f2, f3, H_over_mu);

  const double diff = el.A_nn - el.A_ss;
  const double scale = std::abs(el.A_nn) + std::abs(el.A_ss);
  if (std::abs(diff) <= 1e-14 * scale) {
    fi.e_defined = false;
    fi.flutter = fi.discriminant_sq < 0.0;
    return fi;
  }
  fi.e = el.A_ns / diff;
  const double sum_term = f1 + f2 + 2.0 * fi.e * f3;
  const double dif_term = f1 - f2;
  fi.f4 = diff * diff * (sum_term * sum_term - (1.0 + 4.0 * fi.e * fi.e) * dif_term * dif_term);
  fi.f5 = diff * sum_term;
  if (fi.f4 > 0.0 && fi.f5 > 0.0) {
    const double denom = diff * diff + 4.0 * el.A_ns * el.A_ns;
    const double root = std::sqrt(fi.f4);
    const double lower = (fi.f5 - root) / denom;
    const double upper = (fi.f5 + root) / denom;
    fi.flutter = lower < H_over_mu && H_over_mu < upper;
  }
  return fi;
}

FlutterIndicators flutter_indicators(const Vec2& n, const ConstitutiveTensors& t) {
  const ElasticComponents el = elastic_acoustic_components(n, t);
  const auto [f1, f2, f3] = plastic_products(n, t);
  FlutterIndicators fi = flutter_from_components(el, f1, f2, f3, t.H_over_mu);
  fi.discriminant_sq = discriminant(build_acoustic(n, t).in_plane());
  if (!fi.e_defined) fi.flutter = fi.discriminant_sq < 0.0;
  return fi;
}

FlutterIndicators flutter_indicators(const Vec2& n, const MaterialState& state) {
  return flutter_indicators(n, make_tensors(state));
}

FlutterMask flutter_region_scan(const MaterialState& state_template, const ScanAxis& H_axis,
                                const ScanAxis& theta_axis) {
  FlutterMask mask{H_axis, theta_axis, {}};
  if (H_axis.steps <= 0 || theta_axis.steps <= 0) return mask;
  mask.cells.assign(std::size_t(H_axis.steps) * theta_axis.steps, 0);
  const ConstitutiveTensors t = make_tensors(state_template);

#pragma omp parallel for schedule(static)
  for (int j = 0; j < theta_axis.steps; ++j) {
    const Vec2 n = direction(theta_axis.at(j));
    const ElasticComponents el = elastic_acoustic_components(n, t);
    const auto [f1, f2, f3] = plastic_products(n, t);
    for (int i = 0; i < H_axis.steps; ++i) {
      const double H = H_axis.at(i);
      if (!(H > 0.0)) continue;
      mask.cells[std::size_t(i) * theta_axis.steps + j] =
          flutter_from_components(el, f1, f2, f3, H).flutter ? 1 : 0;
    }
  }
  return mask;
}

std::vector<FlutterRegion> connected_regions(const FlutterMask& mask) {
  std::vector<FlutterRegion> regions;
  if (mask.empty()) return regions;
  const int nh = mask.H_axis.steps, nt = mask.theta_axis.steps;
  std::vector<int> label(mask.cells.size(), -1);
  std::vector<std::pair<int, int>> stack;
  for (int i0 = 0; i0 < nh; ++i0) {
    for (int j0 = 0; j0 < nt; ++j0) {
      const std::size_t k0 = std::size_t(i0) * nt + j0;
      if (!mask.cells[k0] || label[k0] >= 0) continue;
      FlutterRegion r;
      r.H_min = r.H_max = mask.H_axis.at(i0);
      r.theta_min_deg = r.theta_max_deg = mask.theta_axis.at(j0);
      const int id = static_cast<int>(regions.size());
      label[k0] = id;
      stack.assign(1, {i0, j0});
      while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        ++r.cells;
        r.H_min = std::min(r.H_min, mask.H_axis.at(i));
        r.H_max = std::max(r.H_max, mask.H_axis.at(i));
        r.theta_min_deg = std::min(r.theta_min_deg, mask.theta_axis.at(j));
        r.theta_max_deg = std::max(r.theta_max_deg, mask.theta_axis.at(j));
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int m = 0; m < 4; ++m) {
          const int a = i + di[m], b = j + dj[m];
          if (a < 0 || a >= nh || b < 0 || b >= nt) continue;
          const std::size_t k = std::size_t(a) * nt + b;
          if (mask.cells[k] && label[k] < 0) {
            label[k] = id;
            stack.emplace_back(a, b);
          }
        }
      }
      regions.push_back(r);
    }
  }
  return regions;
}

std::vector<AngleInterval> flutter_fans(const MaterialState& state, double resolution_deg) {
  const ConstitutiveTensors t = make_tensors(state);
  auto disc = [&](double theta) { return discriminant(build_acoustic(direction(theta), t).in_plane()); };
  auto edge = [&](double a, double b) {
    // disc(a) and disc(b) have opposite signs.
    const bool neg_a = disc(a) < 0.0;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      if ((disc(m) < 0.0) == neg_a) a = m; else b = m;
    }
    return 0.5 * (a + b);
  };

  const int n = std::max(2, static_cast<int>(std::lround(180.0 / resolution_deg)));
  const double step = 180.0 / n;
  std::vector<bool> neg(n);
  for (int j = 0; j < n; ++j) neg[j] = disc(-90.0 + j * step) < 0.0;

  std::vector<AngleInterval> fans;
  if (std::all_of(neg.begin(), neg.end(), [](bool b) { return b; })) {
    fans.push_back({-90.0, 90.0});
    return fans;
  }
  // Walk once around the circle starting from a non-flutter sample, so that a fan that
  // straddles +-90 degrees stays in one piece (its upper edge is then reported above 90).
  int start = 0;
  while (neg[start]) ++start;
  auto angle = [&](int k) { return -90.0 + (start + k) * step; };
  for (int k = 1; k <= n; ++k) {
    if (!neg[(start + k) % n] || neg[(start + k - 1) % n]) continue;
    double lo = edge(angle(k - 1), angle(k));
    int kk = k;
    while (neg[(start + kk) % n]) ++kk;
    double hi = edge(angle(kk - 1), angle(kk));
    if (lo >= 90.0) {
      lo -= 180.0;
      hi -= 180.0;
    }
    fans.push_back({lo, hi});
    k = kk;
  }
  return fans;
}

namespace {

/// Orthonormal basis of symmetric 3x3 tensors.
std::array<Mat3, 6> symmetric_basis() {
  std::array<Mat3, 6> e;
  for (auto& m : e) m.setZero();
  e[0](0, 0) = 1.0;
  e[1](1, 1) = 1.0;
  e[2](2, 2) = 1.0;
  const double r = 1.0 / std::numbers::sqrt2;
  e[3](0, 1) = e[3](1, 0) = r;
  e[4](1, 2) = e[4](2, 1) = r;
  e[5](0, 2) = e[5](2, 0) = r;
  return e;
}

double contract(const Mat3& a, const Mat3& b) { return a.cwiseProduct(b).sum(); }

double pd_min_eigenvalue_at(const ConstitutiveTensors& t, double inv_H) {
  static const std::array<Mat3, 6> basis = symmetric_basis();
  Eigen::Matrix<double, 6, 6> S;
  std::array<double, 6> ep{}, eq{};
  for (int i = 0; i < 6; ++i) {
    ep[i] = contract(basis[i], t.EP);
    eq[i] = contract(basis[i], t.EQ);
  }
  for (int j = 0; j < 6; ++j) {
    const Mat3 Ej = apply_elastic_tensor(t.lambda_over_mu, t.B, basis[j]);
    for (int i = 0; i < 6; ++i) {
      S(i, j) = contract(basis[i], Ej) - 0.5 * inv_H * (ep[i] * eq[j] + eq[i] * ep[j]);
    }
  }
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver(S, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

double pd_min_eigenvalue(const MaterialState& state) {
  const ConstitutiveTensors t = make_tensors(state);
  return pd_min_eigenvalue_at(t, 1.0 / t.H_over_mu);
}

PdThreshold pd_threshold(const MaterialState& state_template, double H_floor, double tol) {
  const ConstitutiveTensors t = make_tensors(state_template);
  // The smallest eigenvalue is concave in 1/H and positive at 1/H = 0, so it crosses zero once.
  const double h_max = 1.0 / H_floor;
  if (pd_min_eigenvalue_at(t, h_max) > 0.0) return {false, 0.0};
  double H_hi = 1.0;
  while (pd_min_eigenvalue_at(t, 1.0 / H_hi) <= 0.0) H_hi *= 2.0;
  double H_lo = H_hi / 2.0;
  while (H_lo > H_floor && pd_min_eigenvalue_at(t, 1.0 / H_lo) > 0.0) H_lo /= 2.0;
  H_lo = std::max(H_lo, H_floor);
  // Invariant: PD lost at H_lo, PD holds at H_hi.
  while (H_hi - H_lo > tol * 0.5) {
    const double mid = 0.5 * (H_lo + H_hi);
    if (pd_min_eigenvalue_at(t, 1.0 / mid) > 0.0) H_hi = mid; else H_lo = mid;
  }
  return {true, 0.5 * (H_lo + H_hi)};
}

double ellipticity_root(const Vec2& n, const ConstitutiveTensors& t) {
  const ElasticComponents el = elastic_acoustic_components(n, t);
  const auto [f1, f2, f3] = plastic_products(n, t);
  const double det = el.A_nn * el.A_ss - el.A_ns * el.A_ns;
  return (el.A_ss * f1 - el.A_nn * f2 - el.A_ns * f3) / det;
}

EllipticityThreshold ellipticity_threshold(const MaterialState& state_template,
                                           double resolution_deg) {
  const ConstitutiveTensors t = make_tensors(state_template);
  auto H_at = [&](double theta) { return ellipticity_root(direction(theta), t); };

  const int n = std::max(2, static_cast<int>(std::lround(180.0 / resolution_deg)));
  const double step = 180.0 / n;
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int j = 0; j < n; ++j) {
    const double theta = -90.0 + j * step;
    const double h = H_at(theta);
    if (h > best) {
      best = h;
      best_theta = theta;
    }
  }

  // Golden-section refinement of the maximum around the best sample.
  double a = best_theta - step, b = best_theta + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = H_at(c), fd = H_at(d);
  for (int it = 0; it < 80 && (b - a) > 1e-10; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = H_at(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = H_at(d);
    }
  }
  const double theta_star = 0.5 * (a + b);
  const double H_star = H_at(theta_star);
  if (H_star > best) {
    best = H_star;
    best_theta = theta_star;
  }
  if (!(best > 0.0)) return {false, 0.0, 0.0};
  double theta_out = best_theta;
  if (theta_out >= 90.0) theta_out -= 180.0;
  if (theta_out < -90.0) theta_out += 180.0;
  return {true, best, theta_out};
}

}  // namespace flutter
