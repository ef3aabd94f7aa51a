#ifndef PERCAP_CLASSIC_CAPACITY_HPP
#define PERCAP_CLASSIC_CAPACITY_HPP

// ============================================================================
// Error-free spherical perceptron capacity.
//
//   f_gar(kappa)  = E max(g + kappa, 0)^2,  g ~ N(0,1)
//   alpha_c(kappa) = 1 / f_gar(kappa)
//
// plus the lifted upper bound for negative margins: for kappa < 0 the
// condition
//
//   cond(c3) = -c3/2 + I_sph(c3) + I_per(c3, alpha, kappa)
//
// certifies infeasibility (hence an improved capacity upper bound) wherever
// it is negative.  I_per is the gamma-optimized logarithmic moment of
// exp(-c3 max(g+kappa,0)^2 / (4 gamma)).
// ============================================================================

#include "percap/types.hpp"

namespace percap {

// Auxiliary constants of the error-free exponential moment at (c3, gamma):
// same p, q, r, s1, C family as the error-tolerant bound but with no nu
// cutoff (s2 and the nu factor are absent).
struct NegLiftPoint {
    double c3_s = 0.0;
    double gamma_per_s = 0.0;
    double p = 1.0;
    double q = 0.0;
    double r = 0.0;
    double s = 0.0;
    double C = 1.0;
};

// f_gar(kappa) = gauss_second_moment(-kappa, +inf, kappa).  Strictly
// positive and strictly increasing in kappa; underflows to 0 for very
// negative kappa (~ -8 and below).
double f_gar(double kappa);

// alpha_c(kappa) = 1 / f_gar(kappa); +inf sentinel when f_gar underflows.
double alpha_c(double kappa);

// Spherical log-moment term:
//   gamma_hat(c3) = (2 c3 + sqrt(4 c3^2 + 16)) / 8
//   I_sph(c3)     = gamma_hat - (1/(2 c3)) log(1 - c3/(2 gamma_hat))
// The log argument lies in (0,1).  Throws std::domain_error for c3 <= 0.
double i_sph(double c3_s);

// Fills the auxiliary constants at (c3, gamma_per, kappa).
NegLiftPoint neg_lift_aux(double kappa, double c3_s, double gamma_per_s);

// cond(c3) described above, with
//   I_per = sup_{gamma > 0} [ -gamma + (alpha/c3) log I_per1 ],
//   I_per1 = E exp(-c3 max(g+kappa,0)^2/(4 gamma))
//          = (1/2) erfc(kappa/sqrt(2)) + (C/2) erfc(s/sqrt(2)).
// Negativity certifies infeasibility.  Valid for kappa <= 0 (the kappa = 0
// value is the continuity point alpha_c(0) = 2 of the classic bound).
double neg_lift_condition(double kappa, double alpha, double c3_s);

// Smallest alpha (bisection, relative tolerance 1e-6) with
// min_{c3 > 0} neg_lift_condition(kappa, alpha, c3) < 0.  Always at most
// alpha_c(kappa) + 1e-6 because the c3 -> 0 boundary of the minimization
// already reproduces the classic bound.  kappa <= 0 required.
CapacityResult neg_lift_capacity(double kappa);

}  // namespace percap

#endif  // PERCAP_CLASSIC_CAPACITY_HPP
