#include "flutter/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace flutter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr cplx kI{0.0, 1.0};

constexpr double kSeriesRadius = 4.0;

struct SeriesParts {
  cplx cin;   // Cin(z) = int_0^z (1 - cos t)/t dt
  cplx si;
};

// Cin(z) = -sum_{k>=1} (-z^2)^k / (2k (2k)!),  Si(z) = sum_{k>=0} (-1)^k z^{2k+1} / ((2k+1)(2k+1)!)
SeriesParts series(cplx z) {
  cplx cin = 0.0, si = z;
  cplx term = z;   // (-1)^k z^{2k+1} / (2k+1)!   (starts at k = 0)
  double scale = std::abs(z);
  for (int k = 1; k < 400; ++k) {
    // Even term: (-1)^k z^{2k} / (2k)!  obtained from the odd term of order 2k-1.
    const cplx even = -term * z / double(2 * k);
    const cplx cin_t = -even / double(2 * k);
    term = even * z / double(2 * k + 1);
    const cplx si_t = term / double(2 * k + 1);
    cin += cin_t;
    si += si_t;
    scale = std::max({scale, std::abs(cin_t), std::abs(si_t)});
    if (std::abs(cin_t) + std::abs(si_t) <= 0.25 * kEps * std::max(std::abs(cin) + std::abs(si), kEps * scale)) {
      break;
    }
  }
  return {cin, si};
}

bool use_series(cplx z) {
  const double r = std::abs(z);
  return r <= kSeriesRadius || r - std::abs(z.imag()) < 2.0;
}

}  // namespace

cplx scaled_e1(cplx w) {
  // Even contraction of the Stieltjes continued fraction for E1, modified Lentz.
  constexpr double tiny = 1e-300;
  cplx b = w + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 20000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 0.5 * kEps) return h;
  }
  throw std::runtime_error("scaled_e1: continued fraction did not converge");
}

CiSiResult cisi(cplx z) {
  if (z == 0.0) throw std::domain_error("cisi: z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0) {
    throw std::domain_error("cisi: z on the negative real axis");
  }
  if (z.real() < 0.0) {
    CiSiResult r = cisi(-z);
    const cplx jump = z.imag() > 0.0 ? cplx(0.0, kPi) : cplx(0.0, -kPi);
    return {r.ci + jump, -r.si, z};
  }
  if (use_series(z)) {
    const SeriesParts s = series(z);
    return {kEulerGamma + std::log(z) - s.cin, s.si, z};
  }
  // |arg z| < pi/2 here.
  const cplx e_plus = std::exp(-kI * z) * scaled_e1(kI * z);    // E1(iz)
  const cplx e_minus = std::exp(kI * z) * scaled_e1(-kI * z);   // E1(-iz)
  const cplx ci = -0.5 * (e_plus + e_minus);
  const cplx si = kPi / 2.0 + (e_plus - e_minus) / (2.0 * kI);
  return {ci, si, z};
}

cplx planewave_bracket_regular(cplx z) {
  if (z == 0.0) return cplx(2.0 * kEulerGamma, -kPi);
  if (use_series(z)) {
    const SeriesParts s = series(z);
    const cplx c = std::cos(z);
    return 2.0 * (kEulerGamma - s.cin) * c + 2.0 * s.si * std::sin(z) - kI * kPi * c;
  }
  const cplx full = -scaled_e1(kI * z) - scaled_e1(-kI * z) - kI * kPi * std::exp(kI * z);
  return full - 2.0 * std::cos(z) * std::log(z);
}

cplx planewave_bracket(double xi, cplx k) {
  if (!(k.real() > 0.0)) throw std::domain_error("planewave_bracket: Re k must be positive");
  if (xi == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  const cplx z = k * std::abs(xi);
  if (use_series(z)) {
    const SeriesParts s = series(z);
    const cplx c = std::cos(z);
    const cplx ci = kEulerGamma + std::log(z) - s.cin;
    return 2.0 * ci * c + 2.0 * s.si * std::sin(z) - kI * kPi * c;
  }
  // Written through e^w E1(w) so the exponentially large parts of Ci and Si never meet.
  return -scaled_e1(kI * z) - scaled_e1(-kI * z) - kI * kPi * std::exp(kI * z);
}

KernelSample planewave_kernel(double xi, cplx k, cplx c_sq, double rho) {
  if (xi == 0.0) return {cplx(-std::numeric_limits<double>::infinity(), 0.0), true};
  return {planewave_bracket(xi, k) / (2.0 * rho * c_sq), false};
}

cplx phi(double p, cplx k, cplx c_sq, double rho) {
  if (k == 0.0) throw std::invalid_argument("phi: wavenumber must be nonzero");
  return -std::exp(kI * k * std::abs(p)) / (2.0 * rho * kI * k * c_sq);
}

}  // namespace flutter
