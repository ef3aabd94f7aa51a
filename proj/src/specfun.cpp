#include "percap/specfun.hpp"

#include <cmath>

// ============================================================================
// Error functions, normal quantile machinery, Gaussian moments, quadrature.
// ============================================================================

namespace percap {

namespace detail {

// 2/sqrt(pi), the derivative of erf at 0.
constexpr double kTwoOverSqrtPi = 1.1283791670955126;

// Polynomial seed for erfinv (single-precision grade, ~1e-7 relative),
// refined below by Newton steps in double precision.  Two branches in
// w = -log(1 - y^2).
inline double erfinv_seed(double y) {
    double w = -std::log((1.0 - y) * (1.0 + y));
    double p;
    if (w < 5.0) {
        w -= 2.5;
        p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
    } else {
        w = std::sqrt(w) - 3.0;
        p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
    }
    return p * y;
}

// Seed for the deep tail, where the polynomial above is extrapolating badly
// (its fit stops near w = 16).  Inverts the asymptotic erfc(x) ~
// exp(-x^2)/(x sqrt(pi)) = w by two fixed-point passes on
// x^2 = -log w - log x - log sqrt(pi); ~1e-4 relative, plenty for Newton.
inline double erfcinv_tail_seed(double w) {
    constexpr double kLogSqrtPi = 0.5723649429247001;
    const double ell = -std::log(w);
    double s = ell;
    for (int i = 0; i < 2; ++i) s = ell - 0.5 * std::log(s) - kLogSqrtPi;
    return std::sqrt(s);
}

// Recursive helper for adaptive Simpson: whole = Simpson on [a,b],
// fa/fm/fb the endpoint and midpoint values.
double simpson_adapt(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Richardson: |delta|/15 estimates the error of left+right.
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    // m <= a or m >= b means the interval collapsed to adjacent doubles:
    // no further refinement is representable, so the tolerance is
    // unreachable (the depth cap is a backstop against pathological f).
    if (depth >= 60 || m <= a || m >= b)
        throw std::runtime_error(
            "integrate_adaptive: tolerance not reached before the "
            "refinement limit");
    return simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

double erf(double x) {
    assert(std::isfinite(x));
    return std::erf(x);
}

double erfc(double x) {
    assert(std::isfinite(x));
    return std::erfc(x);
}

double erfinv(double y) {
    if (!(y > -1.0 && y < 1.0))
        throw std::domain_error("erfinv: argument must lie in (-1, 1)");
    if (y == 0.0) return 0.0;  // exact odd-function center
    // Newton refinement to double precision.  For |y| > 1/2 iterate on
    // erfc(x) = 1 - y instead of erf(x) = y: the residual 1 - y is exact
    // there (both operands share the binade), so no accuracy is lost to
    // cancellation.  Three steps because the polynomial seed decays to
    // ~1e-2 relative past x ~ 5; below w ~ 7e-12 the asymptotic seed takes
    // over (the polynomial undershoots so far there that Newton on the
    // convex erfc would creep by only ~1/(2x) per step).
    if (y > 0.5) {
        const double w = 1.0 - y;
        double x = w < 7e-12 ? detail::erfcinv_tail_seed(w)
                             : detail::erfinv_seed(y);
        for (int i = 0; i < 3; ++i) {
            const double d = detail::kTwoOverSqrtPi * std::exp(-x * x);
            if (d == 0.0) break;  // derivative underflow in the far tail
            x += (std::erfc(x) - w) / d;
        }
        return x;
    }
    if (y < -0.5) {
        const double w = 1.0 + y;  // erfc(-x) = 1 + y
        double x = w < 7e-12 ? -detail::erfcinv_tail_seed(w)
                             : detail::erfinv_seed(y);
        for (int i = 0; i < 3; ++i) {
            const double d = detail::kTwoOverSqrtPi * std::exp(-x * x);
            if (d == 0.0) break;
            x -= (std::erfc(-x) - w) / d;
        }
        return x;
    }
    double x = detail::erfinv_seed(y);
    for (int i = 0; i < 2; ++i)
        x -= (std::erf(x) - y) / (detail::kTwoOverSqrtPi * std::exp(-x * x));
    return x;
}

double gauss_second_moment(double a, double b, double kappa) {
    if (a > b)
        throw std::domain_error("gauss_second_moment: requires a <= b");
    if (a == b) return 0.0;
    // (1/sqrt(2pi)) int_a^b (z+kappa)^2 e^{-z^2/2} dz in closed form; the
    // a*phi(a) / b*phi(b) terms vanish at infinite endpoints since the
    // density decays faster than any polynomial.
    const double pa = norm_pdf(a), pb = norm_pdf(b);
    const double ca = norm_cdf(a), cb = norm_cdf(b);
    const double ta = std::isinf(a) ? 0.0 : a * pa;
    const double tb = std::isinf(b) ? 0.0 : b * pb;
    const double v = (1.0 + kappa * kappa) * (cb - ca) +
                     2.0 * kappa * (pa - pb) + ta - tb;
    // The closed form can round to a tiny negative for extreme truncations;
    // the integrand is nonnegative, so clamp.
    return v < 0.0 ? 0.0 : v;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    assert(std::isfinite(a) && std::isfinite(b) && tol > 0.0);
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_adapt(f, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace percap
