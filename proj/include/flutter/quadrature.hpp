#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flutter {

using cplx = std::complex<double>;

/// Vector-valued integrand: writes f(x) into `out` (size fixed per call site).
using QuadIntegrand = std::function<void(double x, std::span<cplx> out)>;

struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdiv = 2000;
  /// Panels narrower than this fraction of the full range are never split again.
  double min_rel_width = 1e-12;
};

struct QuadResult {
  std::vector<cplx> value;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive 61-point Gauss-Kronrod quadrature with bisection of the worst panel.
/// `breakpoints` (ascending, at least two) seed the initial panels, so known interior singular
/// points become panel endpoints. Throws NumericalError when `max_subdiv` panels are reached
/// before the error estimate drops below max(abs_tol, rel_tol * |value|).
QuadResult integrate_adaptive(const QuadIntegrand& f, std::size_t dim,
                              std::span<const double> breakpoints, const QuadOptions& opts);

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace flutter
