#pragma once

#include <complex>

namespace flutter {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct CiSiResult {
  cplx ci;
  cplx si;
  cplx argument;
};

/// Cosine and sine integrals, principal branch, |arg z| < pi.
///
/// Power series (Ci written as gamma + ln z - Cin z) inside |z| <= 4 and along a band around the
/// imaginary axis where the series does not cancel; elsewhere Ci and Si are assembled from
/// E1(+-iz) evaluated by continued fraction. Arguments with Re z < 0 are reflected through
/// Si(-z) = -Si(z) and Ci(-z) = Ci(z) -+ i pi. Throws std::domain_error for z = 0 or z on the
/// negative real axis.
CiSiResult cisi(cplx z);

/// e^w E1(w) for w off the negative real axis (continued fraction; used for |w| > 4).
cplx scaled_e1(cplx w);

/// Per-direction plane-wave solution
///   2 Ci(k|xi|) cos(k xi) + 2 Si(k xi) sin(k xi) - i pi cos(k xi),
/// which equals the principal-value integral of sgn(p) e^{ik|p|} / (xi - p) over the real line.
/// Requires Re k > 0. Even in xi; returns -infinity (real part) at xi = 0.
cplx planewave_bracket(double xi, cplx k);

/// Entire part of the bracket: bracket(z) - 2 cos(z) ln(z), evaluated at z = k|xi|.
cplx planewave_bracket_regular(cplx z);

struct KernelSample {
  cplx value;
  bool log_singular = false;   ///< set at xi = 0, where the kernel diverges like ln|xi|
};

/// Outgoing solution of phi'' + k^2 phi + delta/xi^2 / (rho c^2) = 0: the bracket over 2 rho c^2.
KernelSample planewave_kernel(double xi, cplx k, cplx c_sq, double rho = 1.0);

/// Radon-domain amplitude -e^{ik|p|} / (2 rho i k c^2). Throws std::invalid_argument for k = 0.
cplx phi(double p, cplx k, cplx c_sq, double rho = 1.0);

}  // namespace flutter
