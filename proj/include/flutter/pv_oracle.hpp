#pragma once

#include <complex>

namespace flutter {

/// Principal value of int sgn(p) e^{ik|p|} / (xi - p) dp over the real line, by quadrature:
/// the singular part on [0, 2 xi] is handled by subtraction, the remaining pieces run along
/// rotated rays where e^{ikp} decays. For Im k < 0 this is the analytic continuation from
/// Im k > 0. Requires Re k > 0 and xi != 0. Uses Boost quadrature only (no Ci/Si).
std::complex<double> planewave_pv_quadrature(double xi, std::complex<double> k);

}  // namespace flutter
