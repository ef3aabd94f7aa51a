#include "percap/error_capacity.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "percap/classic_capacity.hpp"
#include "percap/specfun.hpp"

// ============================================================================
// Small-c3 error-tolerant capacity bound.
// ============================================================================

namespace percap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_valid(const PerceptronParams& params) {
    if (!(params.f_wb >= 0.0 && params.f_wb < 1.0))
        throw std::domain_error("PerceptronParams: f_wb must lie in [0, 1)");
    if (params.f_wb > norm_cdf(params.kappa))
        throw std::domain_error(
            "PerceptronParams: f_wb > Phi(kappa) leaves no admissible "
            "stationary point (nu_hat would be negative)");
}

}  // namespace

double nu_hat(const PerceptronParams& params) {
    require_valid(params);
    // sqrt(nu_hat) = sqrt(2) erfinv(1 - 2 f_wb) + kappa >= 0 on the domain.
    const double root = kSqrt2 * erfinv(1.0 - 2.0 * params.f_wb) + params.kappa;
    assert(root >= -1e-12);
    return root * root;
}

double f_err_hat(const PerceptronParams& params) {
    const double nh = nu_hat(params);
    return gauss_second_moment(-params.kappa, std::sqrt(nh) - params.kappa,
                               params.kappa);
}

CapacityResult alpha_upper(const PerceptronParams& params) {
    CapacityResult res;
    res.iterations = 0;
    if (params.f_wb == 0.0) {
        // Continuity point: zero allowed errors is the classic bound.
        res.alpha_bound = alpha_c(params.kappa);
        res.optimizer_point = LiftPoint{0.0, 0.5, kInf};
        res.residual = 0.0;
        return res;
    }
    const double fe = f_err_hat(params);
    if (fe <= 0.0) {
        res.alpha_bound = kInf;  // every alpha admits f_wb-fraction misses
        res.residual = 0.0;
        return res;
    }
    res.alpha_bound = 1.0 / fe;
    res.optimizer_point = LiftPoint{0.0, 0.5, nu_hat(params)};
    res.residual = 1.0 - res.alpha_bound * fe;  // defining condition at root
    return res;
}

double gardner_x(const PerceptronParams& params) {
    if (!(params.f_wb > 0.0 && params.f_wb < 1.0))
        throw std::domain_error("gardner_x: requires 0 < f_wb < 1");
    // f_wb = Phi(kappa - x)  <=>  x = kappa - sqrt(2) erfinv(2 f_wb - 1).
    return params.kappa - kSqrt2 * erfinv(2.0 * params.f_wb - 1.0);
}

double f_wb_from_alpha(double kappa, double alpha) {
    const double ac = alpha_c(kappa);
    if (alpha < ac * (1.0 - 1e-12))
        throw std::domain_error(
            "f_wb_from_alpha: alpha below alpha_c(kappa), no bracket");
    // f_err_hat is strictly decreasing in f_wb from f_gar down to 0, so
    // solve f_err_hat(f) = 1/alpha by bisection on f.
    const double target = 1.0 / alpha;
    double lo = 0.0, hi = norm_cdf(kappa);
    const double f0 = f_gar(kappa);
    if (f0 <= target) return 0.0;  // alpha <= alpha_c up to rounding
    for (int i = 0; i < 200 && (hi - lo) > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        PerceptronParams p{kappa, mid, std::nullopt};
        const double fe = (mid >= norm_cdf(kappa)) ? 0.0 : f_err_hat(p);
        (fe > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace percap
