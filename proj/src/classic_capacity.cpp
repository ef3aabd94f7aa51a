#include "percap/classic_capacity.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "percap/specfun.hpp"
#include "scalar_opt.hpp"

// ============================================================================
// Error-free capacity: the classic bound 1/f_gar and the lifted
// negative-margin improvement.
// ============================================================================

namespace percap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Search ranges for the outer c3 minimization and inner gamma maximization
// (the objectives are smooth but not certified unimodal, hence grid+refine).
constexpr int kC3GridCount = 64;
constexpr double kC3Min = 1e-4, kC3Max = 50.0;
constexpr int kGammaGridCount = 48;
constexpr double kGammaMin = 1e-6, kGammaMax = 20.0;

// log I_per1 at (c3, gamma, kappa) where
//   I_per1 = E exp(-c3 max(g+kappa,0)^2/(4 gamma))
//          = Phi(-kappa) + (C/2) erfc(s/sqrt(2)),
// evaluated through u = c3/(2 gamma) so that only the bounded combination
// exp(-kappa^2 u/(2(1+u)))/sqrt(1+u) appears (no overflow for any gamma).
double log_i_per1(double c3, double gamma, double kappa) {
    const double u = c3 / (2.0 * gamma);
    const double p = 1.0 + u;
    const double sp = std::sqrt(p);
    // s = -kappa sqrt(p) + q/sqrt(p) with q = kappa u; simplifies to
    // -kappa/sqrt(p).
    const double s = -kappa / sp;
    const double C = std::exp(-kappa * kappa * u / (2.0 * p)) / sp;
    const double v = norm_cdf(-kappa) + 0.5 * C * erfc(s / kSqrt2);
    return std::log(v);
}

// Inner objective g(gamma) = -gamma + (alpha/c3) log I_per1; I_per is its
// supremum over gamma > 0.
double i_per(double c3, double alpha, double kappa) {
    const auto g = [&](double gamma) {
        return -gamma + (alpha / c3) * log_i_per1(c3, gamma, kappa);
    };
    const auto grid = detail::log_grid(kGammaMin, kGammaMax, kGammaGridCount);
    // Interior local maxima refined by golden section; the gamma -> 0
    // boundary value (alpha/c3) log Phi(-kappa) is a valid supremum
    // candidate as well (the limit is finite).
    double best = (alpha / c3) * std::log(norm_cdf(-kappa));
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = g(grid[i]);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
            const double x =
                detail::golden_max(g, grid[i - 1], grid[i + 1], 1e-10);
            best = std::max(best, g(x));
        }
    }
    best = std::max(best, vals.back());  // defensive: boundary of the range
    return best;
}

}  // namespace

double f_gar(double kappa) {
    return gauss_second_moment(-kappa, kInf, kappa);
}

double alpha_c(double kappa) {
    const double f = f_gar(kappa);
    if (f <= 0.0) return kInf;  // underflow regime, kappa <= ~-8
    return 1.0 / f;
}

double i_sph(double c3_s) {
    if (c3_s <= 0.0) throw std::domain_error("i_sph: requires c3_s > 0");
    const double gamma_hat =
        (2.0 * c3_s + std::sqrt(4.0 * c3_s * c3_s + 16.0)) / 8.0;
    const double arg = 1.0 - c3_s / (2.0 * gamma_hat);
    assert(arg > 0.0 && arg < 1.0);
    return gamma_hat - std::log(arg) / (2.0 * c3_s);
}

NegLiftPoint neg_lift_aux(double kappa, double c3_s, double gamma_per_s) {
    assert(c3_s > 0.0 && gamma_per_s > 0.0);
    NegLiftPoint a;
    a.c3_s = c3_s;
    a.gamma_per_s = gamma_per_s;
    a.p = 1.0 + c3_s / (2.0 * gamma_per_s);
    a.q = c3_s * kappa / (2.0 * gamma_per_s);
    a.r = c3_s * kappa * kappa / (4.0 * gamma_per_s);
    a.s = -kappa * std::sqrt(a.p) + a.q / std::sqrt(a.p);
    a.C = std::exp(a.q * a.q / (2.0 * a.p) - a.r) / std::sqrt(a.p);
    return a;
}

double neg_lift_condition(double kappa, double alpha, double c3_s) {
    if (kappa > 0.0)
        throw std::domain_error("neg_lift_condition: requires kappa <= 0");
    if (!(alpha > 0.0) || !(c3_s > 0.0))
        throw std::domain_error(
            "neg_lift_condition: requires alpha > 0 and c3_s > 0");
    return -0.5 * c3_s + i_sph(c3_s) + i_per(c3_s, alpha, kappa);
}

CapacityResult neg_lift_capacity(double kappa) {
    if (kappa > 0.0)
        throw std::domain_error("neg_lift_capacity: requires kappa <= 0");
    const double ac = alpha_c(kappa);
    if (!std::isfinite(ac))
        throw std::domain_error(
            "neg_lift_capacity: classic capacity underflowed (kappa too "
            "negative)");

    // min over c3 of the condition, including its analytic c3 -> 0 boundary
    // value 1 - sqrt(alpha f_gar) whose crossing reproduces alpha_c.
    const auto grid = detail::log_grid(kC3Min, kC3Max, kC3GridCount);
    const auto min_cond = [&](double alpha) {
        double best = 1.0 - std::sqrt(alpha * f_gar(kappa));
        std::vector<double> vals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            vals[i] = neg_lift_condition(kappa, alpha, grid[i]);
        std::size_t imin = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (vals[i] < vals[imin]) imin = i;
        best = std::min(best, vals[imin]);
        const double lo = grid[imin > 0 ? imin - 1 : 0];
        const double hi = grid[imin + 1 < grid.size() ? imin + 1 : imin];
        if (hi > lo) {
            const double x = detail::golden_min(
                [&](double c) { return neg_lift_condition(kappa, alpha, c); },
                lo, hi, 1e-10);
            best = std::min(best, neg_lift_condition(kappa, alpha, x));
        }
        return best;
    };

    const double hi0 = ac * 1.0001;
    if (!(min_cond(hi0) < 0.0))
        throw std::runtime_error(
            "neg_lift_capacity: no sign change in [1e-3, 10 alpha_c]");
    int iterations = 0;
    double alpha = detail::bisect_threshold(
        [&](double a) { return min_cond(a) < 0.0; }, 1e-3, hi0, 1e-6,
        &iterations);

    // Regula-falsi polish inside the final bracket drives the residual to
    // ~1e-12 without leaving the certified interval.
    double a_lo = alpha * (1.0 - 1e-6), a_hi = alpha;
    double f_lo = min_cond(a_lo), f_hi = min_cond(a_hi);
    for (int i = 0; i < 12 && f_lo > 0.0 && f_hi < 0.0; ++i) {
        const double mid = a_lo + f_lo * (a_hi - a_lo) / (f_lo - f_hi);
        const double fm = min_cond(mid);
        ++iterations;
        if (std::abs(fm) < 1e-12) {
            alpha = mid;
            f_hi = fm;
            break;
        }
        if (fm > 0.0) {
            a_lo = mid;
            f_lo = fm;
        } else {
            a_hi = mid;
            f_hi = fm;
        }
        alpha = a_hi;
    }

    CapacityResult res;
    res.alpha_bound = alpha;
    res.residual = f_hi;
    res.iterations = iterations;
    return res;
}

}  // namespace percap
