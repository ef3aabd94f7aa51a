#ifndef PERCAP_MONTE_CARLO_HPP
#define PERCAP_MONTE_CARLO_HPP

// ============================================================================
// Empirical validation of the analytic bounds: an exact finite-m oracle for
// the trimmed margin-shortfall norm, sampled-expectation checks of the
// lifted exponential moment, and small-instance feasibility experiments
// over random Gaussian pattern matrices.
//
// All randomness is counter-based: every variate is a pure function of
// (seed, stream, counter), so trials are order-independent and results are
// bit-reproducible regardless of execution interleaving.
// ============================================================================

#include <cstdint>
#include <optional>
#include <vector>

#include "percap/types.hpp"

namespace percap {

// ----------------------------------------------------------------------------
// Configuration and results
// ----------------------------------------------------------------------------

struct McConfig {
    std::uint64_t seed = 0;
    int trials = 1;
    int n = 1;       // pattern length
    int m = 1;       // pattern count
    double kappa = 0.0;
    double f_wb = 0.0;  // in [0, 1/2); errors_allowed = floor(f_wb * m)
};

// floor(f_wb * m), the number of patterns allowed to miss their margin.
int errors_allowed(const McConfig& config);

// One sampled instance.  H is m x n row-major.  d, x and lambda are
// deterministic defaults (the oracle's kept-pattern selector for g, the
// first standard basis vector, and the uniform unit vector) so that every
// field satisfies its normalization invariant from construction.
struct McInstance {
    std::vector<double> H;
    std::vector<double> g;
    std::vector<std::uint8_t> d;  // 1 = kept; sum = m - errors_allowed
    std::vector<double> x;        // ||x||_2 = 1
    std::vector<double> lambda;   // componentwise >= 0, ||lambda||_2 = 1
};

struct McReport {
    double mean = 0.0;
    double std_error = 0.0;
    int trials_used = 0;
    std::optional<std::vector<double>> per_trial;
};

// ----------------------------------------------------------------------------
// Counter-based Gaussian stream
// ----------------------------------------------------------------------------

// value(k) is a pure function of (seed, stream, k): two rounds of a 64-bit
// mix finalizer feed a 53-bit uniform in (0,1), mapped through the exact
// normal quantile sqrt(2) * erfinv(2u - 1).
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream);
    double operator()(std::uint64_t counter) const;   // N(0,1) variate #counter
    double uniform(std::uint64_t counter) const;      // U(0,1) variate #counter
  private:
    std::uint64_t key_;
};

// ----------------------------------------------------------------------------
// Operations
// ----------------------------------------------------------------------------

// Instance for (config, trial_index): H from counters 0..mn-1 of the
// trial's stream, g from the next m counters.  Deterministic given
// (seed, trial_index).
McInstance sample_instance(const McConfig& config, int trial_index);

// Exact minimum over kept-pattern selectors d (sum d = m - errors_allowed)
// of || (diag(d) (g + kappa 1))_+ ||_2: since the objective is a sum of
// independent nonnegative per-coordinate terms v_i = max(g_i + kappa, 0)^2,
// dropping the errors_allowed largest v_i is optimal.
double f_err_oracle(const std::vector<double>& g, double kappa,
                    int errors_allowed);

// Mean and standard error of f_err_oracle(g)/sqrt(m) over independent
// trials; concentrates on sqrt(f_err_hat(kappa, f_wb)) for large m.
// Requires m >= 100.
McReport f_err_concentration(const McConfig& config);

// Result of the max-min margin subproblem on k kept rows:
//   maximize  min_i  H_i . x   over the unit ball ||x||_2 <= 1.
// The returned x is unit-norm and margin is its exact margin, so the value
// is always attainable; when the ball optimum is positive the dual polish
// pins it down far below the documented 1e-3 tolerance, otherwise the best
// unit vector found is reported (an unconstrained-norm optimum of 0 at
// x = 0 has no unit representative).  converged is false only if the final
// primal-dual gap exceeds the 1e-3 tolerance.
struct MarginResult {
    double margin = 0.0;
    std::vector<double> x;
    bool converged = false;
};

// Projected subgradient ascent (5000 iterations, step 1/sqrt(iter), iterate
// averaging, best-margin tracking) followed by an exact dual refinement:
// the minimum-norm point of the convex hull of the rows (pairwise
// coordinate exchange), whose norm equals the ball optimum when positive.
MarginResult margin_subproblem(const std::vector<double>& H_kept, int k,
                               int n);

enum class FeasMode { exact, greedy };

// Can some selector of m - errors_allowed rows achieve margin kappa on the
// unit sphere?  kappa >= 0 required (the ball relaxation and the sphere
// agree there: a feasible point with positive margin scales up to the
// sphere without decreasing margins; kappa = 0 therefore demands a strictly
// positive margin).  exact mode enumerates all selectors (requires
// C(m, errors_allowed) <= 1e6, else std::domain_error); greedy mode
// repeatedly drops the most-violated row and is one-sided: true implies
// feasible, false is inconclusive.
bool feasibility_check(const std::vector<double>& H, int m, int n,
                       double kappa, int errors_allowed, FeasMode mode);

struct SweepPoint {
    double alpha = 0.0;
    double probability = 0.0;
    double std_error = 0.0;
};

// Empirical feasibility probability per alpha: m = round(alpha * n) per
// point, errors_allowed = floor(f_wb * m); exact mode when the selector
// count is within the cap, greedy otherwise.  Binomial standard errors.
std::vector<SweepPoint> capacity_sweep(const McConfig& config,
                                       const std::vector<double>& alpha_grid);

// Sample mean of exp(-c3 min(0, max(g+kappa,0)^2 - nu)/(4 gamma)) over
// standard normal g, with standard error; cross-checks the closed form
// i_wb_1.  Requires samples >= 1e4.
McReport i_wb_1_sampled(const LiftPoint& point, double kappa,
                        std::int64_t samples, std::uint64_t seed);

}  // namespace percap

#endif  // PERCAP_MONTE_CARLO_HPP
