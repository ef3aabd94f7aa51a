#ifndef PERCAP_LIFTED_CAPACITY_HPP
#define PERCAP_LIFTED_CAPACITY_HPP

// ============================================================================
// Exponentially lifted capacity bound for error-tolerant storage.
//
// For c3 > 0 the infeasibility condition is
//
//   cond(c3) = -c3/2 + I_sph(c3) + I_wb_hat(c3, alpha, kappa, f_wb)
//
// where I_wb_hat optimizes, over the remaining variables (gamma, nu), the
// objective
//
//   G(c3, gamma, nu) = -alpha nu (1 - f_wb)/(4 gamma) - gamma
//                      + (alpha/c3) log I_wb_1(c3, gamma, nu)
//   I_wb_1 = E exp( -c3 min(0, max(g+kappa,0)^2 - nu) / (4 gamma) ),
//
// taken at its interior saddle: nu at the unique stationary (minimizing)
// point nu*(gamma) where the reweighted tail mass equals f_wb, then the
// interior local maximum over gamma.  cond(c3) < 0 for some c3 certifies
// infeasibility, so
//
//   alpha_lower_lifted = smallest alpha with min_{c3} cond(c3) < 0
//
// is an upper bound on the capacity that can only improve on (never exceed)
// alpha_upper: the c3 -> 0 boundary of the minimization reproduces
// cond -> 1 - sqrt(alpha f_err_hat) whose zero crossing is exactly
// alpha_upper.
// ============================================================================

#include "percap/types.hpp"

namespace percap {

// Result of the inner (gamma, nu) optimization at fixed c3: the saddle
// value, the optimizing point, and whether an interior stationary point was
// found (when none exists the best scanned value is reported with
// converged = false, and the c3 contributes nothing to the outer
// minimization).
struct IwbHatResult {
    double value = 0.0;
    LiftPoint point;
    bool converged = false;
};

// Result of minimizing cond over c3 at fixed (kappa, f_wb, alpha):
// xi = -min cond (so xi > 0 certifies infeasibility), with the argmin point.
struct XiLiftResult {
    double xi = 0.0;
    LiftPoint point;
};

// Auxiliary constants p, q, r, s1, s2, C at (c3, gamma, nu, kappa); see
// types.hpp for the formulas.  Requires c3_s > 0, gamma_wb_s > 0,
// nu_wb >= 0.
LiftAux lift_aux(const LiftPoint& point, double kappa);

// Closed form of the exponential moment,
//   I_wb_1 = exp(c3 nu/(4 gamma)) (1/2) erfc(kappa/sqrt(2))
//          + (C/2) (erfc(s1/sqrt(2)) - erfc(s2/sqrt(2)))
//          + (1/2) erfc((sqrt(nu)-kappa)/sqrt(2)),
// the three terms being the regions g+kappa < 0, margin shortfall below nu,
// and shortfall at least nu.  Requires c3_s > 0, gamma_wb_s > 0, nu_wb >= 0.
double i_wb_1(const LiftPoint& point, double kappa);

// The (gamma, nu) objective G above at an explicit point (params.alpha
// required).  Exposed for stationarity checks; evaluated in a scaled form
// that never overflows.
double lift_objective(const LiftPoint& point, const PerceptronParams& params);

// c3 -> 0 limit of G at fixed (gamma, nu):
//   G0(gamma, nu) = -gamma - (alpha/(4 gamma)) X(nu),
//   X(nu) = E min(0, max(g+kappa,0)^2 - nu) + nu (1 - f_wb),
// whose stationary point is (gamma, nu) = (sqrt(alpha f_err_hat)/2, nu_hat)
// with value -sqrt(alpha f_err_hat).
double lift_objective_small_c3(double gamma, double nu,
                               const PerceptronParams& params);

// Inner optimization at fixed c3 (params.alpha required): nu by root
// bracketing + bisection on the stationarity condition, gamma by a
// 48-point logarithmic grid on [1e-4, 20] with golden-section refinement of
// every interior local maximum (the best one is returned; multiple maxima
// have not been observed but are handled).
IwbHatResult i_wb_hat(double c3_s, const PerceptronParams& params);

// cond(c3) at fixed parameters; +inf when the inner problem has no interior
// stationary point.  Requires c3_s > 0.
double lift_condition(double c3_s, const PerceptronParams& params);

// Minimizes cond over c3 on a 64-point logarithmic grid [1e-4, 50] with
// golden-section refinement, always including the analytic c3 -> 0 boundary
// candidate 1 - sqrt(alpha f_err_hat) at (c3, gamma, nu) = (0, 1/2, nu_hat).
// Returns xi = -min cond and the optimizing point.
XiLiftResult xi_lift(const PerceptronParams& params);

// Smallest alpha (bisection to relative tolerance 1e-6 on the sign of the
// minimized condition) such that xi_lift > 0.  Satisfies
// result <= alpha_upper + 1e-6.  Same domain requirements as nu_hat.
CapacityResult alpha_lower_lifted(double kappa, double f_wb);

}  // namespace percap

#endif  // PERCAP_LIFTED_CAPACITY_HPP
