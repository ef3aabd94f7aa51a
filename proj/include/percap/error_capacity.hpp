#ifndef PERCAP_ERROR_CAPACITY_HPP
#define PERCAP_ERROR_CAPACITY_HPP

// ============================================================================
// Storage capacity upper bound when a fraction f_wb of the stored patterns
// may violate their margin.  This is the small-c3 (replica-symmetric-style)
// bound:
//
//   nu_hat   = (sqrt(2) erfinv(1 - 2 f_wb) + kappa)^2
//   f_err_hat = (1/sqrt(2 pi)) int_{-kappa}^{sqrt(nu_hat)-kappa}
//                   (z + kappa)^2 e^{-z^2/2} dz
//   alpha_upper = 1 / f_err_hat
//
// nu_hat is the stationary point of the underlying variational problem; the
// equivalent quantile form x = sqrt(nu_hat) matches the classical
// prediction obtained by discarding the worst-fitting f_wb mass.
// ============================================================================

#include "percap/types.hpp"

namespace percap {

// Stationary value nu_hat >= 0.  Requires f_wb <= Phi(kappa) (otherwise the
// expression under the square is negative); violations throw
// std::domain_error rather than clamping, so caller bugs stay visible.
double nu_hat(const PerceptronParams& params);

// f_err_hat in (0, f_gar(kappa)]; approaches f_gar(kappa) as f_wb -> 0 and
// 0 as f_wb -> Phi(kappa).  Same domain requirement as nu_hat.
double f_err_hat(const PerceptronParams& params);

// alpha_upper = 1 / f_err_hat with the optimizing boundary point
// (c3 = 0, gamma = 1/2, nu = nu_hat) attached.  f_wb = 0 returns the
// classic alpha_c(kappa) exactly (continuity); f_err_hat = 0 yields an
// infinite-capacity sentinel.
CapacityResult alpha_upper(const PerceptronParams& params);

// The quantile x solving f_wb = Phi(kappa - x), in closed form
// x = kappa - sqrt(2) erfinv(2 f_wb - 1); equals sqrt(nu_hat) when
// nu_hat >= 0.  Requires 0 < f_wb < 1.
double gardner_x(const PerceptronParams& params);

// Monotone inverse of alpha_upper in f_wb at fixed kappa: the f_wb with
// alpha_upper(kappa, f_wb) = alpha, by bisection on (0, Phi(kappa)) to
// absolute tolerance 1e-10.  Throws std::domain_error when
// alpha < alpha_c(kappa) (no bracket).
double f_wb_from_alpha(double kappa, double alpha);

}  // namespace percap

#endif  // PERCAP_ERROR_CAPACITY_HPP
