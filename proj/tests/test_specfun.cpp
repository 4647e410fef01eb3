#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "flutter/pv_oracle.hpp"
#include "flutter/specfun.hpp"

using namespace flutter;
using cld = std::complex<long double>;

namespace {

// Power series in long double, independent of the library's split into series and continued fraction.
std::pair<cld, cld> cisi_series(cld z) {
  const long double gamma = 0.577215664901532860606512090082402431L;
  cld cin = 0, si = 0, term = z;   // term = (-1)^n z^(2n+1) / (2n+1)!
  for (int n = 0; n < 200; ++n) {
    si += term / (long double)(2 * n + 1);
    const cld next_even = -term * z / (long double)(2 * n + 2);   // (-1)^(n+1) z^(2n+2)/(2n+2)!
    cin -= next_even / (long double)(2 * n + 2);
    term = next_even * z / (long double)(2 * n + 3);
    if (std::abs(term) < 1e-40L * std::abs(si)) break;
  }
  return {gamma + std::log(z) - cin, si};
}

void expect_close(cplx a, cplx b, double tol) {
  EXPECT_LE(std::abs(a - b), tol * std::max(1.0, std::abs(b))) << a << " vs " << b;
}

}  // namespace

TEST(Cisi, FrozenRealValues) {
  const auto r = cisi(1.0);
  EXPECT_NEAR(r.ci.real(), 0.33740392290096813, 1e-15);
  EXPECT_NEAR(r.si.real(), 0.94608307036718301, 1e-15);
  EXPECT_NEAR(r.ci.imag(), 0.0, 1e-15);
}

TEST(Cisi, FrozenComplexValues) {
  struct Row {
    cplx z, ci, si;
  };
  const Row rows[] = {
      {{2.0, 0.5}, {0.4658473033701972, -0.11553902700341622}, {1.6604582382082589, 0.22772036547752533}},
      {{7.0, -1.5}, {0.22825243577590063, -0.20682986567894331}, {1.3364387417245121, -0.21707224948607124}},
      {{0.3, 2.0}, {2.4134902582977631, 1.0109783077611045}, {0.54026483846909026, 2.4579298473270156}},
      {{12.0, 0.2}, {-0.050558795209828531, 0.014166838885303195}, {1.5034850596713834, -0.0089860957611106435}},
      {{3.0, -3.0}, {-1.0330363901399314, 2.4161733680761959}, {3.9920720850015084, 1.04172496781555}},
  };
  for (const auto& row : rows) {
    const auto r = cisi(row.z);
    expect_close(r.ci, row.ci, 1e-13);
    expect_close(r.si, row.si, 1e-13);
  }
}

TEST(Cisi, MatchesLongDoubleSeriesAcrossRouteBoundary) {
  for (double mag : {0.5, 2.0, 3.9, 4.1, 5.0, 6.0}) {
    for (double arg_deg : {-80.0, -45.0, -10.0, 0.0, 10.0, 45.0, 80.0}) {
      const cplx z = std::polar(mag, arg_deg * std::numbers::pi / 180.0);
      const auto [ci, si] = cisi_series(cld(z.real(), z.imag()));
      const auto r = cisi(z);
      expect_close(r.ci, cplx(ci), 1e-12);
      expect_close(r.si, cplx(si), 1e-12);
    }
  }
}

TEST(Cisi, SmallArgumentLimit) {
  const double z = 1e-6;
  EXPECT_NEAR(cisi(z).ci.real() - kEulerGamma - std::log(z), 0.0, 1e-12);
  EXPECT_NEAR(cisi(z).si.real(), z, 1e-18);
}

TEST(Cisi, DerivativesByFiniteDifference) {
  // Ci'(z) = cos z / z, Si'(z) = sin z / z
  for (cplx z : {cplx(0.7, 0.2), cplx(5.0, -0.8), cplx(15.0, 1.0)}) {
    const double h = 1e-5;
    const cplx dci = (cisi(z + h).ci - cisi(z - h).ci) / (2 * h);
    const cplx dsi = (cisi(z + h).si - cisi(z - h).si) / (2 * h);
    expect_close(dci, std::cos(z) / z, 1e-8);
    expect_close(dsi, std::sin(z) / z, 1e-8);
  }
}

TEST(Cisi, ConjugationAndReflection) {
  const cplx z(4.5, 1.3);
  expect_close(cisi(std::conj(z)).ci, std::conj(cisi(z).ci), 1e-14);
  expect_close(cisi(std::conj(z)).si, std::conj(cisi(z).si), 1e-14);
  expect_close(cisi(-z).si, -cisi(z).si, 1e-14);
}

TEST(Cisi, DomainErrors) {
  EXPECT_THROW(cisi(0.0), std::domain_error);
  EXPECT_THROW(cisi(-2.0), std::domain_error);
}

TEST(Bracket, FrozenValues) {
  expect_close(planewave_bracket(1.5, {1.0, 0.0}), {2.7092737416925482, -0.22222747309475513}, 1e-13);
  expect_close(planewave_bracket(4.0, {0.9, 0.3}), {-0.51387150554482175, 0.9047992537201613}, 1e-13);
  expect_close(planewave_bracket(10.0, {1.1, -0.12}), {-10.445660181248307, -0.049404704790179519}, 1e-13);
  expect_close(planewave_bracket(0.2, {2.0, 0.5}), {-0.45284838230894704, -2.3145854690830089}, 1e-13);
}

TEST(Bracket, EvenInXiAndSingularAtZero) {
  const cplx k(1.2, 0.1);
  expect_close(planewave_bracket(-3.3, k), planewave_bracket(3.3, k), 1e-15);
  EXPECT_TRUE(std::isinf(planewave_bracket(0.0, k).real()));
  EXPECT_THROW(planewave_bracket(1.0, {-1.0, 0.0}), std::domain_error);
}

TEST(Bracket, RegularPartContinuity) {
  // bracket - 2 cos(z) ln z is entire: no jump when crossing the series/continued-fraction switch
  const cplx k(1.0, 0.05);
  for (double xi : {3.99, 4.01}) {
    const cplx z = k * xi;
    expect_close(planewave_bracket_regular(z), planewave_bracket(xi, k) - 2.0 * std::cos(z) * std::log(z), 1e-12);
  }
}

TEST(Bracket, SatisfiesOdeAwayFromOrigin) {
  // phi'' + k^2 phi = -2 / xi^2 for xi != 0
  const cplx k(0.8, -0.1);
  const double xi = 2.5, h = 1e-3;
  const cplx d2 = (planewave_bracket(xi + h, k) - 2.0 * planewave_bracket(xi, k) + planewave_bracket(xi - h, k)) / (h * h);
  EXPECT_LE(std::abs(d2 + k * k * planewave_bracket(xi, k) + 2.0 / (xi * xi)), 1e-5);
}

TEST(Bracket, PrincipalValueQuadrature) {
  for (double xi : {0.3, 2.0, 9.0}) {
    for (cplx k : {cplx(1.0, 0.0), cplx(0.7, 0.25), cplx(1.4, -0.2)}) {
      const cplx a = planewave_bracket(xi, k), b = planewave_pv_quadrature(xi, k);
      EXPECT_LE(std::abs(a - b), 1e-7 * std::abs(b)) << "xi=" << xi << " k=" << k;
    }
  }
}

TEST(Kernel, ScalingAndPhi) {
  const cplx k(1.0, 0.2), c2 = 1.0 / (k * k);
  const auto s = planewave_kernel(2.0, k, c2);
  expect_close(s.value, planewave_bracket(2.0, k) / (2.0 * c2), 1e-15);
  EXPECT_FALSE(s.log_singular);
  EXPECT_TRUE(planewave_kernel(0.0, k, c2).log_singular);
  expect_close(phi(1.5, k, c2), -std::exp(cplx(0, 1) * k * 1.5) / (2.0 * cplx(0, 1) * k * c2), 1e-15);
  EXPECT_THROW(phi(1.0, 0.0, 1.0), std::invalid_argument);
}
