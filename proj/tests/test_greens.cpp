#include <chrono>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flutter/errors.hpp"
#include "flutter/greens.hpp"

using namespace flutter;

namespace {

MaterialState isotropic() {
  MaterialState s = reference_case(1, 1e12);
  s.elastic.b_hat_deg = std::acos(1.0 / std::sqrt(3.0)) * 180.0 / M_PI;
  return s;
}

double rel(const Mat2c& a, const Mat2c& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(Greens, IsotropicHankelSolution) {
  // (i/4) H0 decomposition with c_T = 1, c_L = sqrt(3), omega = 1
  GreensEvalConfig cfg;
  const auto g = greens_at({2.0, 0.0}, isotropic(), cfg).g;
  EXPECT_LE(std::abs(g(0, 0) - cplx(-0.050516870926235717, 0.094779515385105908)), 1e-8);
  EXPECT_LE(std::abs(g(1, 1) - cplx(-0.093674907403599367, 0.018979578415134941)), 1e-8);
  EXPECT_LE(std::abs(g(0, 1)), 1e-10);
  const auto h = greens_at({1.2, -1.6}, isotropic(), cfg).g;
  EXPECT_LE(std::abs(h(0, 1) - cplx(-0.02071585750913455, -0.036383969745586064)), 1e-8);
}

TEST(Greens, EvenInPosition) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  GreensEvalConfig cfg;
  for (const auto& s : {reference_case(3, 7.0), reference_case(2, 1.5), reference_case(3, 1.5)}) {
    for (int i = 0; i < 4; ++i) {
      const Vec2 x(u(rng), u(rng));
      EXPECT_LE(rel(greens_at(x, s, cfg).g, greens_at(-x, s, cfg).g), 1e-7);
    }
  }
}

TEST(Greens, AssociativeIsSymmetric) {
  auto s = reference_case(3, 5.0);
  s.plastic.chi_deg = s.plastic.psi_deg;
  GreensEvalConfig cfg;
  for (const Vec2& x : {Vec2(2.0, 1.0), Vec2(-3.0, 5.0), Vec2(0.4, -0.3)}) {
    const auto g = greens_at(x, s, cfg).g;
    EXPECT_LE(std::abs(g(0, 1) - g(1, 0)), 1e-8 * std::abs(g(0, 1)) + 1e-12);
  }
}

TEST(Greens, NonassociativeIsNotSymmetric) {
  const auto g = greens_at({2.0, 1.0}, reference_case(3, 2.0), {}).g;
  EXPECT_GT(std::abs(g(0, 1) - g(1, 0)), 1e-4 * g.norm());
}

TEST(Greens, RadialProfileSampling) {
  const auto p = greens_radial_profile(-45.0, 0.5, 2.0, 4, reference_case(3, 7.0), {});
  ASSERT_EQ(p.size(), 4u);
  EXPECT_DOUBLE_EQ(p[0].r, 0.5);
  EXPECT_DOUBLE_EQ(p[3].r, 2.0);
  EXPECT_THROW(greens_radial_profile(-45.0, 0.0, 2.0, 4, reference_case(3, 7.0), {}), std::exception);
}

TEST(Greens, ConfigValidation) {
  GreensEvalConfig cfg;
  cfg.omega_bar = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.quad_rel_tol = 0.5;
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_THROW(greens_at({0.0, 0.0}, reference_case(1), {}), std::invalid_argument);
}

TEST(Greens, BatchedEvaluatorMatchesAdaptive) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (const auto& [s, omega] : {std::pair{reference_case(2, 0.25), 1.0}, std::pair{reference_case(3, 7.0), 2.0}}) {
    GreensEvalConfig cfg;
    cfg.omega_bar = omega;
    const Vec2c f(std::cos(0.7), std::sin(0.7));
    const GreensFieldEvaluator ev(s, cfg, f, 30.0);
    for (int i = 0; i < 6; ++i) {
      const Vec2 x(u(rng), u(rng));
      const Vec2c ref = greens_at(x, s, cfg).g * f;
      EXPECT_LE((ev.apply(x) - ref).norm(), 1e-6 * ref.norm()) << x.transpose();
    }
    EXPECT_THROW(ev.apply({40.0, 0.0}), std::invalid_argument);
  }
}

TEST(Greens, FourierOracleConvergesInDamping) {
  // Outside flutter the oracle carries an O(epsilon) damping bias; one Richardson step removes it.
  const auto s = reference_case(3, 7.0);
  GreensEvalConfig cfg;
  const Vec2 x(6.0, -8.0);
  const Mat2c g = greens_at(x, s, cfg).g;
  const Mat2c o1 = fourier_oracle_greens(x, s, cfg, 2e-3, 20.0, 1024).g;
  const Mat2c o2 = fourier_oracle_greens(x, s, cfg, 1e-3, 20.0, 1024).g;
  const double e1 = rel(o1, g), e2 = rel(o2, g);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
  EXPECT_LE(rel(2.0 * o2 - o1, g), 2e-4);
}
