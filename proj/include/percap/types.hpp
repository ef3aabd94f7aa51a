#ifndef PERCAP_TYPES_HPP
#define PERCAP_TYPES_HPP

// ============================================================================
// Shared value types for capacity queries and their results.
// ============================================================================

#include <optional>
#include <vector>

namespace percap {

// A capacity query: margin kappa, allowed wrongly-stored fraction f_wb in
// [0, 1), and (where an operation needs it) the pattern ratio alpha = m/n.
struct PerceptronParams {
    double kappa = 0.0;
    double f_wb = 0.0;
    std::optional<double> alpha;  // > 0 when present
};

// Optimization variables of the lifted bound.  The exponential-moment
// machinery requires c3_s > 0 and gamma_wb_s > 0; the small-c3 boundary
// regime is represented by c3_s = 0 with gamma_wb_s = 1/2 and nu_wb equal
// to its stationary value (the convention used when reporting results).
struct LiftPoint {
    double c3_s = 0.0;
    double gamma_wb_s = 0.5;
    double nu_wb = 0.0;
};

// Auxiliary constants of the piecewise closed form of the exponential
// moment:
//   p = 1 + c3/(2 gamma)            q = c3 kappa / (2 gamma)
//   r = c3 kappa^2 / (4 gamma)      s1 = -kappa sqrt(p) + q/sqrt(p)
//   s2 = (sqrt(nu) - kappa) sqrt(p) + q/sqrt(p)
//   C = exp(q^2/(2p) - r) exp(c3 nu/(4 gamma)) / sqrt(p)
struct LiftAux {
    double p = 1.0;
    double q = 0.0;
    double r = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double C = 1.0;
};

// A bound value together with the optimizing parameters and convergence
// diagnostics.  residual holds the value of the defining condition at the
// returned alpha (|residual| <= 1e-8 at convergence).
struct CapacityResult {
    double alpha_bound = 0.0;
    std::optional<LiftPoint> optimizer_point;
    double residual = 0.0;
    int iterations = 0;
};

// One (abscissa, bound(s)) row of a swept curve.
struct CurveSample {
    double abscissa = 0.0;
    std::optional<double> alpha_u;    // c3->0 bound
    std::optional<double> alpha_low;  // lifted bound
};

using CurveTable = std::vector<CurveSample>;

}  // namespace percap

#endif  // PERCAP_TYPES_HPP
