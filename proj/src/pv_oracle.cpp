#include "flutter/pv_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace flutter {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

template <class F>
cplx finite(F f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double re = GK::integrate([&](double x) { return f(x).real(); }, a, b, 20, 1e-13);
  const double im = GK::integrate([&](double x) { return f(x).imag(); }, a, b, 20, 1e-13);
  return {re, im};
}

template <class F>
cplx half_line(F f) {
  boost::math::quadrature::exp_sinh<double> q;
  const double re = q.integrate([&](double t) { return f(t).real(); }, 1e-13);
  const double im = q.integrate([&](double t) { return f(t).imag(); }, 1e-13);
  return {re, im};
}

}  // namespace

cplx planewave_pv_quadrature(double xi, cplx k) {
  if (!(k.real() > 0.0)) throw std::domain_error("planewave_pv_quadrature: Re k must be positive");
  if (xi == 0.0) throw std::domain_error("planewave_pv_quadrature: xi must be nonzero");
  xi = std::abs(xi);
  const cplx eikx = std::exp(kI * k * xi);

  // PV int_0^{2 xi} e^{ikp} / (xi - p) dp; the subtracted constant integrates to zero by symmetry.
  // e^{ikp} - e^{ik xi} = e^{ik xi} 2i sin(w/2) e^{iw/2}, w = k (p - xi), avoids cancellation.
  auto near = [&](double p) -> cplx {
    const double d = p - xi;
    if (d == 0.0) return -kI * k * eikx;
    const cplx w = k * d;
    return eikx * 2.0 * kI * std::sin(0.5 * w) * std::exp(0.5 * kI * w) / (-d);
  };
  const cplx inner = finite(near, 0.0, xi) + finite(near, xi, 2.0 * xi);

  // int_{2 xi}^inf e^{ikp} / (xi - p) dp along p = 2 xi + i t.
  const cplx e2 = eikx * eikx;
  const cplx tail = half_line([&](double t) -> cplx {
    return kI * e2 * std::exp(-k * t) / (-xi - kI * t);
  });

  // int_0^inf e^{ikp} / (xi + p) dp along p = i t.
  const cplx mirror = half_line([&](double t) -> cplx {
    return kI * std::exp(-k * t) / (xi + kI * t);
  });

  return inner + tail - mirror;
}

}  // namespace flutter
