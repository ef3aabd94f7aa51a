#ifndef PERCAP_SPECFUN_HPP
#define PERCAP_SPECFUN_HPP

// ============================================================================
// Scalar special functions used by every capacity formula in this library:
// error functions, the inverse error function, the standard normal pdf/cdf,
// and the truncated Gaussian second moment in closed form.  An adaptive
// Simpson integrator is provided as an independent cross-check oracle; all
// production paths evaluate closed forms only.
// ============================================================================

#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace percap {

// Sentinel for infinite integration limits; handled analytically via
// Phi(+inf)=1, Phi(-inf)=0 rather than by truncation.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ----------------------------------------------------------------------------
// Error functions
// ----------------------------------------------------------------------------

// erf(x) = (2/sqrt(pi)) int_0^x e^{-t^2} dt, absolute error <= 1e-15.
double erf(double x);

// erfc(x) = 1 - erf(x), computed without cancellation for large x
// (relative error <= 1e-13 for x <= 10).
double erfc(double x);

// Inverse of erf on (-1,1): returns x with erf(x) = y to absolute error
// 1e-14 (rational seed + two Newton refinements).  Throws std::domain_error
// for |y| >= 1.
double erfinv(double y);

// ----------------------------------------------------------------------------
// Standard normal helpers
// ----------------------------------------------------------------------------

// phi(z) = e^{-z^2/2} / sqrt(2 pi)
inline double norm_pdf(double z) {
    if (std::isinf(z)) return 0.0;  // Gaussian density vanishes at +-inf
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

// Phi(z) = P(N(0,1) <= z) = 0.5 * erfc(-z / sqrt(2)); exact 1/0 at +-inf.
inline double norm_cdf(double z) {
    if (z == kInf) return 1.0;
    if (z == -kInf) return 0.0;
    return 0.5 * erfc(-z / std::sqrt(2.0));
}

// ----------------------------------------------------------------------------
// Truncated second moment
// ----------------------------------------------------------------------------

// gauss_second_moment(a, b, kappa)
//   = (1/sqrt(2 pi)) int_a^b (z + kappa)^2 e^{-z^2/2} dz
//   = (1 + kappa^2) (Phi(b) - Phi(a)) + 2 kappa (phi(a) - phi(b))
//     + a phi(a) - b phi(b)
// Infinite limits allowed through the kInf sentinel.  Throws
// std::domain_error if a > b.
double gauss_second_moment(double a, double b, double kappa);

// ----------------------------------------------------------------------------
// Quadrature oracle
// ----------------------------------------------------------------------------

// Adaptive Simpson estimate of int_a^b f with absolute error <= tol.
// Finite a, b only (callers truncate Gaussian tails at |z| = 12, where the
// density is ~2e-32).  Throws std::runtime_error if the recursion exceeds
// depth 60 without meeting the tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol);

}  // namespace percap

#endif  // PERCAP_SPECFUN_HPP
