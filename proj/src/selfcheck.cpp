#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "flutter/commands.hpp"
#include "flutter/errors.hpp"
#include "flutter/pv_oracle.hpp"
#include "flutter/specfun.hpp"

namespace flutter {

namespace {

MaterialState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MaterialState s;
  s.elastic.lambda_over_mu = 3.0 * u(rng);
  s.elastic.b_hat_deg = 20.0 + 65.0 * u(rng);
  s.elastic.theta_sigma_deg = -90.0 + 180.0 * u(rng);
  s.plastic.H_over_mu = 0.05 + 5.0 * u(rng);
  s.plastic.psi_deg = 60.0 * u(rng);
  s.plastic.chi_deg = 60.0 * u(rng);
  s.stress = dev_direction_from_lode(-180.0 + 360.0 * u(rng));
  return s;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult check_dual_bases(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-90.0, 90.0);
  double worst_dual = 0.0, worst_rec = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto t = make_tensors(random_state(rng));
    const Mat2 A = build_acoustic(direction(ang(rng)), t).in_plane();
    const Spectrum s = spectrum(A);
    if (s.defective) continue;
    const Mat2c W = (Mat2c() << s.w1.transpose() * s.v1, s.w1.transpose() * s.v2,
                     s.w2.transpose() * s.v1, s.w2.transpose() * s.v2).finished();
    worst_dual = std::max(worst_dual, (W - Mat2c::Identity()).cwiseAbs().maxCoeff());
    const Mat2c rec = spectral_sum(s, s.c1_sq, s.c2_sq);
    worst_rec = std::max(worst_rec, (rec - A.cast<cplx>()).norm() / A.norm());
  }
  return {"dual bases and spectral reconstruction", worst_dual <= 1e-10 && worst_rec <= 1e-10,
          "max |v_i.w_j - delta_ij| = " + sci(worst_dual) + ", reconstruction " + sci(worst_rec)};
}

CheckResult check_sum_product(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-90.0, 90.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const MaterialState st = random_state(rng);
    const auto t = make_tensors(st);
    const Vec2 n = direction(ang(rng));
    const ElasticComponents el = elastic_acoustic_components(n, t);
    const auto [f1, f2, f3] = plastic_products(n, t);
    const double h = 1.0 / st.plastic.H_over_mu;
    const double tr = el.A_nn + el.A_ss - (f1 - f2) * h;
    const double det = el.A_nn * el.A_ss - el.A_ns * el.A_ns + (el.A_nn * f2 - el.A_ss * f1 + el.A_ns * f3) * h;
    const Spectrum s = spectrum(build_acoustic(n, t));
    const double scale = std::abs(el.A_nn) + std::abs(el.A_ss) + (std::abs(f1) + std::abs(f2) + std::abs(f3)) * h;
    worst = std::max(worst, std::abs(s.c1_sq + s.c2_sq - tr) / scale);
    worst = std::max(worst, std::abs(s.c1_sq * s.c2_sq - det) / (scale * scale));
  }
  return {"eigenvalue sum/product vs f1..f3", worst <= 1e-9, "max relative deviation " + sci(worst)};
}

CheckResult check_flutter_equivalence(std::mt19937_64& rng, bool inject) {
  std::uniform_real_distribution<double> ang(-90.0, 90.0);
  int compared = 0, mismatches = 0;
  for (int i = 0; i < 5000; ++i) {
    const MaterialState st = random_state(rng);
    const auto t = make_tensors(st);
    const Vec2 n = direction(ang(rng));
    const ElasticComponents el = elastic_acoustic_components(n, t);
    if (std::abs(el.A_nn - el.A_ss) < 1e-9 * (std::abs(el.A_nn) + std::abs(el.A_ss))) continue;
    auto [f1, f2, f3] = plastic_products(n, t);
    if (inject) f3 = -f3;
    const FlutterIndicators fi = flutter_from_components(el, f1, f2, f3, st.plastic.H_over_mu);
    const Mat2 A = build_acoustic(n, t).in_plane();
    const double d = A(0, 0) - A(1, 1);
    const double disc = d * d + 4.0 * A(0, 1) * A(1, 0);
    if (std::abs(disc) < 1e-10 * A.squaredNorm()) continue;
    ++compared;
    if (fi.flutter != (disc < 0.0)) ++mismatches;
  }
  return {"three-inequality flutter test vs discriminant sign", mismatches == 0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(compared) + " draws"};
}

CheckResult check_pv_identity(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double xi = 0.05 + 15.0 * u(rng);
    const double mag = 0.2 + 2.8 * u(rng);
    const double arg = deg_to_rad(-30.0 + 60.0 * u(rng));
    const cplx k = std::polar(mag, arg);
    const cplx a = planewave_bracket(xi, k);
    const cplx b = planewave_pv_quadrature(xi, k);
    worst = std::max(worst, std::abs(a - b) / std::abs(b));
  }
  return {"plane-wave kernel vs principal-value quadrature", worst <= 1e-5,
          "max relative deviation " + sci(worst) + " over 20 points"};
}

CheckResult check_evenness(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GreensEvalConfig cfg;
  cfg.quad_rel_tol = 1e-8;
  double worst = 0.0;
  int done = 0;
  for (int attempt = 0; attempt < 50 && done < 5; ++attempt) {
    MaterialState st = random_state(rng);
    const EllipticityThreshold el = ellipticity_threshold(st);
    if (el.lost) st.plastic.H_over_mu = std::max(st.plastic.H_over_mu, 1.5 * el.H_cr);
    const double r = 0.5 + 9.5 * u(rng);
    const double th = 2.0 * std::numbers::pi * u(rng);
    const Vec2 x(r * std::cos(th), r * std::sin(th));
    try {
      const Mat2c gp = greens_at(x, st, cfg).g;
      const Mat2c gm = greens_at(-x, st, cfg).g;
      worst = std::max(worst, (gp - gm).norm() / gp.norm());
      ++done;
    } catch (const NumericalError&) {
      continue;   // state outside the Green's function domain; draw another
    }
  }
  return {"Green's tensor evenness G(x) = G(-x)", done == 5 && worst <= 1e-6,
          "max relative deviation " + sci(worst) + " at " + std::to_string(done) + " points"};
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<CheckResult> out;
  out.push_back(check_dual_bases(rng));
  out.push_back(check_sum_product(rng));
  out.push_back(check_flutter_equivalence(rng, opts.inject_f3_sign_error));
  out.push_back(check_pv_identity(rng));
  out.push_back(check_evenness(rng));
  return out;
}

int cmd_selfcheck(const SelfcheckOptions& opts, std::ostream& os,
                  const std::filesystem::path& report_dir) {
  std::unique_ptr<RunOutputs> out;
  if (!report_dir.empty()) out = std::make_unique<RunOutputs>(report_dir);
  const auto results = run_selfcheck(opts);
  std::ostringstream text;
  bool all = true;
  for (const auto& r : results) {
    text << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.pass;
  }
  text << (all ? "selfcheck passed" : "selfcheck FAILED") << '\n';
  os << text.str();
  if (out) out->write("selfcheck.txt", text.str());
  return all ? kExitOk : kExitFailure;
}

}  // namespace flutter
