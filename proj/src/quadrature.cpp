#include "flutter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "flutter/errors.hpp"

namespace flutter {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
using Gauss = boost::math::quadrature::gauss<double, 30>;

struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::vector<cplx> value;
  double error = 0.0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double norm1(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::abs(x);
  return s;
}

Panel evaluate_panel(const QuadIntegrand& f, std::size_t dim, double a, double b,
                     std::vector<cplx>& scratch) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::vector<cplx> kron(dim, 0.0), gauss(dim, 0.0);
  scratch.resize(dim);

  f(c, scratch);
  for (std::size_t d = 0; d < dim; ++d) kron[d] += wk[0] * scratch[d];
  for (std::size_t i = 1; i < x.size(); ++i) {
    for (const double sgn : {-1.0, 1.0}) {
      f(c + sgn * h * x[i], scratch);
      for (std::size_t d = 0; d < dim; ++d) {
        kron[d] += wk[i] * scratch[d];
        if (i % 2 == 1) gauss[d] += wg[i / 2] * scratch[d];
      }
    }
  }
  Panel p{a, b, std::vector<cplx>(dim), 0.0};
  double err = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    p.value[d] = h * kron[d];
    err += std::abs(h * (kron[d] - gauss[d]));
  }
  p.error = std::max(err, 4.0 * std::numeric_limits<double>::epsilon() * norm1(p.value));
  return p;
}

}  // namespace

QuadResult integrate_adaptive(const QuadIntegrand& f, std::size_t dim,
                              std::span<const double> breakpoints, const QuadOptions& opts) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_adaptive: need two breakpoints");
  const double span_width = breakpoints.back() - breakpoints.front();
  const double min_width = opts.min_rel_width * span_width;

  std::vector<cplx> scratch;
  std::priority_queue<Panel> open;
  std::vector<Panel> frozen;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] > breakpoints[i]) {
      open.push(evaluate_panel(f, dim, breakpoints[i], breakpoints[i + 1], scratch));
    }
  }

  auto totals = [&](std::vector<cplx>& value, double& error) {
    value.assign(dim, 0.0);
    error = 0.0;
    auto add = [&](const Panel& p) {
      for (std::size_t d = 0; d < dim; ++d) value[d] += p.value[d];
      error += p.error;
    };
    for (const auto& p : frozen) add(p);
    auto copy = open;
    while (!copy.empty()) {
      add(copy.top());
      copy.pop();
    }
  };

  QuadResult result;
  int panels = int(open.size());
  // Running sums avoid re-walking the heap after every split.
  std::vector<cplx> value;
  double error = 0.0;
  totals(value, error);
  while (true) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * norm1(value));
    if (error <= tol || open.empty()) break;
    if (panels >= opts.max_subdiv) {
      throw NumericalError("adaptive quadrature did not converge within " +
                           std::to_string(opts.max_subdiv) + " panels (error estimate " +
                           std::to_string(error) + ", tolerance " + std::to_string(tol) + ")");
    }
    Panel worst = open.top();
    open.pop();
    if (worst.b - worst.a <= min_width) {
      frozen.push_back(std::move(worst));
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, dim, worst.a, mid, scratch);
    Panel right = evaluate_panel(f, dim, mid, worst.b, scratch);
    for (std::size_t d = 0; d < dim; ++d) value[d] += left.value[d] + right.value[d] - worst.value[d];
    error += left.error + right.error - worst.error;
    open.push(std::move(left));
    open.push(std::move(right));
    ++panels;
  }
  // Re-sum once so the reported value carries no drift from the incremental updates.
  totals(result.value, result.error);
  result.panels = panels;
  return result;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace flutter
