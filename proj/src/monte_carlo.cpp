#include "percap/monte_carlo.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "percap/specfun.hpp"

// ============================================================================
// Counter-based randomness, the exact trimmed-shortfall oracle, the max-min
// margin solver, and the feasibility experiments.
// ============================================================================

namespace percap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kMarginTol = 1e-3;    // documented solver tolerance
constexpr double kPositiveTol = 1e-9;  // "strictly positive" cutoff at kappa=0
constexpr double kSelectorCap = 1e6;   // exact-mode enumeration cap
constexpr int kSubgradIters = 5000;

// --- 64-bit mixing -----------------------------------------------------------

inline std::uint64_t fmix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDULL;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ULL;
    z ^= z >> 33;
    return z;
}

// --- small dense linear algebra (row-major) ----------------------------------

inline double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const double* a, int n) { return std::sqrt(dot(a, a, n)); }

// min_i H_i . x over the k rows of H (k x n row-major).
inline double min_margin(const std::vector<double>& H, int k, int n,
                         const double* x, int* argmin = nullptr) {
    double best = kInf;
    for (int i = 0; i < k; ++i) {
        const double m = dot(&H[static_cast<std::size_t>(i) * n], x, n);
        if (m < best) {
            best = m;
            if (argmin) *argmin = i;
        }
    }
    return best;
}

// Shared feasibility decision on a sphere margin value.  The solver
// tolerance is folded in for positive thresholds; kappa = 0 demands a
// strictly positive margin (any feasible interior point scales to the
// sphere, so the ball relaxation is exact only for margins > 0).
inline bool margin_feasible(double margin, double kappa) {
    return kappa > 0.0 ? margin >= kappa - kMarginTol : margin > kPositiveTol;
}

double binomial_or_inf(int m, int b) {
    // C(m, b) with saturation well above the enumeration cap.
    double c = 1.0;
    b = std::min(b, m - b);
    for (int i = 1; i <= b; ++i) {
        c *= static_cast<double>(m - b + i) / i;
        if (c > 1e15) return kInf;
    }
    return c;
}

// Minimum-norm point of the convex hull of the k rows of H, by pairwise
// weight exchange between the most- and least-aligned support vertices.
// On return mu holds hull coordinates of w (= H^T mu).  The hull minimum
// equals the unit-ball max-min margin whenever it is positive.
double mdm_min_norm(const std::vector<double>& H, int k, int n,
                    std::vector<double>* mu_out, std::vector<double>* w_out) {
    std::vector<double>& mu = *mu_out;
    std::vector<double>& w = *w_out;
    mu.assign(static_cast<std::size_t>(k), 1.0 / k);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j)
            w[static_cast<std::size_t>(j)] +=
                H[static_cast<std::size_t>(i) * n + j] / k;
    // Near-degenerate hulls (0 close to a facet) converge slowly; the gap
    // criterion below is what actually terminates well-conditioned cases,
    // usually within a few hundred exchanges.
    const int iters = std::max(100000, 1000 * k);
    for (int it = 0; it < iters; ++it) {
        int i_min = 0, i_max = -1;
        double d_min = kInf, d_max = -kInf;
        for (int i = 0; i < k; ++i) {
            const double di =
                dot(&H[static_cast<std::size_t>(i) * n], w.data(), n);
            if (di < d_min) {
                d_min = di;
                i_min = i;
            }
            if (mu[static_cast<std::size_t>(i)] > 1e-15 && di > d_max) {
                d_max = di;
                i_max = i;
            }
        }
        if (i_max < 0 || d_max - d_min < 1e-14) break;
        double uu = 0.0, wu = 0.0;
        for (int j = 0; j < n; ++j) {
            const double uj = H[static_cast<std::size_t>(i_min) * n + j] -
                              H[static_cast<std::size_t>(i_max) * n + j];
            uu += uj * uj;
            wu += w[static_cast<std::size_t>(j)] * uj;
        }
        if (uu <= 0.0) break;
        const double t =
            std::clamp(-wu / uu, 0.0, mu[static_cast<std::size_t>(i_max)]);
        if (t == 0.0) break;
        mu[static_cast<std::size_t>(i_min)] += t;
        mu[static_cast<std::size_t>(i_max)] -= t;
        for (int j = 0; j < n; ++j)
            w[static_cast<std::size_t>(j)] +=
                t * (H[static_cast<std::size_t>(i_min) * n + j] -
                     H[static_cast<std::size_t>(i_max) * n + j]);
    }
    return norm2(w.data(), n);
}

}  // namespace

int errors_allowed(const McConfig& config) {
    assert(config.f_wb >= 0.0 && config.f_wb < 0.5 && config.m >= 1);
    const int b = static_cast<int>(std::floor(config.f_wb * config.m));
    assert(b >= 0 && b < config.m);
    return b;
}

// ----------------------------------------------------------------------------
// GaussianStream
// ----------------------------------------------------------------------------

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream)
    : key_(fmix64(seed ^ fmix64(stream * 0x9E3779B97F4A7C15ULL +
                                0xD1B54A32D192ED03ULL))) {}

double GaussianStream::uniform(std::uint64_t counter) const {
    const std::uint64_t z =
        fmix64(key_ ^ (counter * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL));
    // Top 53 bits, centered half a step away from both 0 and 1.
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::operator()(std::uint64_t counter) const {
    return kSqrt2 * erfinv(2.0 * uniform(counter) - 1.0);
}

// ----------------------------------------------------------------------------
// Instances and the exact shortfall oracle
// ----------------------------------------------------------------------------

McInstance sample_instance(const McConfig& config, int trial_index) {
    assert(trial_index >= 0 && trial_index < config.trials);
    const int m = config.m, n = config.n;
    const GaussianStream rng(config.seed,
                             static_cast<std::uint64_t>(trial_index));
    McInstance inst;
    inst.H.resize(static_cast<std::size_t>(m) * n);
    inst.g.resize(static_cast<std::size_t>(m));
    // H occupies counters 0 .. mn-1, g the next m.
    for (std::size_t i = 0; i < inst.H.size(); ++i) inst.H[i] = rng(i);
    for (int i = 0; i < m; ++i)
        inst.g[static_cast<std::size_t>(i)] =
            rng(static_cast<std::uint64_t>(m) * n + i);

    // Kept-pattern selector: drop the budget largest shortfall terms of g
    // (the oracle's optimal choice); ties broken by index for determinism.
    const int budget = errors_allowed(config);
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double t =
            std::max(inst.g[static_cast<std::size_t>(i)] + config.kappa, 0.0);
        v[static_cast<std::size_t>(i)] = t * t;
    }
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return v[static_cast<std::size_t>(a)] != v[static_cast<std::size_t>(b)]
                   ? v[static_cast<std::size_t>(a)] >
                         v[static_cast<std::size_t>(b)]
                   : a < b;
    });
    inst.d.assign(static_cast<std::size_t>(m), 1);
    for (int i = 0; i < budget; ++i)
        inst.d[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 0;

    inst.x.assign(static_cast<std::size_t>(n), 0.0);
    inst.x[0] = 1.0;
    inst.lambda.assign(static_cast<std::size_t>(m),
                       1.0 / std::sqrt(static_cast<double>(m)));
    return inst;
}

double f_err_oracle(const std::vector<double>& g, double kappa,
                    int errors_allowed) {
    const int m = static_cast<int>(g.size());
    if (!(errors_allowed >= 0 && errors_allowed < m))
        throw std::domain_error(
            "f_err_oracle: errors_allowed must be in [0, m)");
    std::vector<double> v(g.size());
    for (int i = 0; i < m; ++i) {
        const double t = std::max(g[static_cast<std::size_t>(i)] + kappa, 0.0);
        v[static_cast<std::size_t>(i)] = t * t;
    }
    const int keep = m - errors_allowed;
    if (errors_allowed > 0)
        std::nth_element(v.begin(), v.begin() + keep, v.end());
    double s = 0.0;
    for (int i = 0; i < keep; ++i) s += v[static_cast<std::size_t>(i)];
    return std::sqrt(s);
}

McReport f_err_concentration(const McConfig& config) {
    if (config.m < 100)
        throw std::domain_error("f_err_concentration: requires m >= 100");
    const int m = config.m, trials = config.trials;
    const int budget = errors_allowed(config);
    const double root_m = std::sqrt(static_cast<double>(m));
    McReport rep;
    rep.per_trial.emplace();
    rep.per_trial->reserve(static_cast<std::size_t>(trials));
    // g occupies counters 0 .. m-1 of the trial's stream (no H is needed
    // for this experiment).
    std::vector<double> g(static_cast<std::size_t>(m));
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const GaussianStream rng(config.seed, static_cast<std::uint64_t>(t));
        for (int i = 0; i < m; ++i)
            g[static_cast<std::size_t>(i)] = rng(static_cast<std::uint64_t>(i));
        const double val = f_err_oracle(g, config.kappa, budget) / root_m;
        rep.per_trial->push_back(val);
        sum += val;
        sumsq += val * val;
    }
    rep.trials_used = trials;
    rep.mean = sum / trials;
    const double var =
        trials > 1 ? std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1))
                   : 0.0;
    rep.std_error = std::sqrt(var / trials);
    return rep;
}

// ----------------------------------------------------------------------------
// Max-min margin over the unit ball
// ----------------------------------------------------------------------------

MarginResult margin_subproblem(const std::vector<double>& H_kept, int k,
                               int n) {
    assert(k >= 1 && n >= 1 &&
           H_kept.size() == static_cast<std::size_t>(k) * n);
    MarginResult res;
    res.x.assign(static_cast<std::size_t>(n), 0.0);

    // Start from the first row (or e1 if it vanishes).
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const double r0 = norm2(&H_kept[0], n);
    if (r0 > 0.0)
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] =
                H_kept[static_cast<std::size_t>(j)] / r0;
    else
        x[0] = 1.0;

    std::vector<double> xsum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cand(static_cast<std::size_t>(n));
    double best = -kInf;

    const auto consider = [&](const std::vector<double>& y) {
        const double r = norm2(y.data(), n);
        if (r <= 1e-12) return;
        for (int j = 0; j < n; ++j)
            cand[static_cast<std::size_t>(j)] =
                y[static_cast<std::size_t>(j)] / r;
        const double mm = min_margin(H_kept, k, n, cand.data());
        if (mm > best) {
            best = mm;
            res.x = cand;
        }
    };

    // Projected subgradient ascent on the ball: the active (minimal) row is
    // a supergradient of the concave min-margin objective.  Both the
    // current iterate and the running average are tracked through their
    // sphere normalizations.
    for (int it = 1; it <= kSubgradIters; ++it) {
        int imin = 0;
        min_margin(H_kept, k, n, x.data(), &imin);
        const double step = 1.0 / std::sqrt(static_cast<double>(it));
        const double* h = &H_kept[static_cast<std::size_t>(imin) * n];
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] += step * h[j];
        const double r = norm2(x.data(), n);
        if (r > 1.0)
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] /= r;
        for (int j = 0; j < n; ++j)
            xsum[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
        consider(x);
        consider(xsum);
    }

    // Exact dual refinement: the ball optimum equals the norm of the
    // minimum-norm point of conv{rows} whenever that is positive.
    std::vector<double> mu, w;
    const double dual = mdm_min_norm(H_kept, k, n, &mu, &w);
    if (dual > kPositiveTol) consider(w);

    res.margin = best;
    // The ball optimum is max(0, dual): x = 0 attains 0, and a positive
    // optimum equals the hull minimum norm.
    res.converged = std::abs(best - std::max(dual, 0.0)) <= kMarginTol;
    return res;
}

// ----------------------------------------------------------------------------
// Feasibility
// ----------------------------------------------------------------------------

namespace {

// Exact search over kept-pattern selectors.  Dropping a row outside the
// support of the current minimum-norm hull point cannot change the optimum
// (the optimum is already a hull point of the remaining rows, and dropping
// constraints never lowers it), so any useful drop set must intersect the
// support; branching on support rows only is therefore exhaustive while
// pruning almost all of the C(m, budget) selectors.
class ExactFeasibility {
  public:
    ExactFeasibility(const std::vector<double>& H, int m, int n, double kappa)
        : H_(H), m_(m), n_(n), kappa_(kappa) {}

    bool search(std::vector<int>* dropped, int budget_left) {
        if (!visited_.insert(*dropped).second) return false;
        gather_kept(*dropped);
        const int k = m_ - static_cast<int>(dropped->size());
        std::vector<double> mu, w;
        const double dual = mdm_min_norm(kept_, k, n_, &mu, &w);
        // Decide on an ATTAINED margin only: the iterate's norm upper-bounds
        // the hull minimum, so an unconverged w would overstate feasibility.
        int worst = 0;
        double attained = -kInf;
        if (dual > 0.0) {
            for (double& wj : w) wj /= dual;
            attained = min_margin(kept_, k, n_, w.data(), &worst);
        }
        if (margin_feasible(attained, kappa_)) return true;
        if (budget_left == 0) return false;
        // Branch set: support rows of mu, plus the most violated row as
        // cheap insurance against an inexact support at near-zero duals.
        std::vector<int> branch;
        for (int i = 0; i < k; ++i)
            if (mu[static_cast<std::size_t>(i)] > 1e-12 || i == worst)
                branch.push_back(i);
        // Translate kept-row positions back to original row indices.
        std::vector<int> original(branch.size());
        {
            std::size_t next = 0;
            int pos = 0;
            for (int i = 0; i < m_; ++i) {
                if (next < dropped->size() && (*dropped)[next] == i) {
                    ++next;
                    continue;
                }
                for (std::size_t b = 0; b < branch.size(); ++b)
                    if (branch[b] == pos) original[b] = i;
                ++pos;
            }
        }
        for (const int row : original) {
            const auto at =
                std::lower_bound(dropped->begin(), dropped->end(), row);
            dropped->insert(at, row);
            const bool ok = search(dropped, budget_left - 1);
            dropped->erase(
                std::lower_bound(dropped->begin(), dropped->end(), row));
            if (ok) return true;
        }
        return false;
    }

  private:
    void gather_kept(const std::vector<int>& dropped) {
        kept_.clear();
        std::size_t next = 0;
        for (int i = 0; i < m_; ++i) {
            if (next < dropped.size() && dropped[next] == i) {
                ++next;
                continue;
            }
            kept_.insert(kept_.end(),
                         H_.begin() + static_cast<std::size_t>(i) * n_,
                         H_.begin() + static_cast<std::size_t>(i + 1) * n_);
        }
    }

    const std::vector<double>& H_;
    int m_, n_;
    double kappa_;
    std::vector<double> kept_;
    std::set<std::vector<int>> visited_;
};

bool feasible_greedy(const std::vector<double>& H, int m, int n, double kappa,
                     int budget) {
    std::vector<double> kept = H;
    int k = m;
    for (int round = 0; round <= budget; ++round) {
        const MarginResult r = margin_subproblem(kept, k, n);
        if (margin_feasible(r.margin, kappa)) return true;
        if (round == budget || k <= 1) return false;  // inconclusive
        int worst = 0;
        min_margin(kept, k, n, r.x.data(), &worst);
        kept.erase(kept.begin() + static_cast<std::size_t>(worst) * n,
                   kept.begin() + static_cast<std::size_t>(worst + 1) * n);
        --k;
    }
    return false;
}

}  // namespace

bool feasibility_check(const std::vector<double>& H, int m, int n,
                       double kappa, int errors_allowed, FeasMode mode) {
    if (kappa < 0.0)
        throw std::domain_error(
            "feasibility_check: kappa < 0 unsupported (ball-to-sphere "
            "scaling fails for negative margins)");
    if (!(m >= 1 && n >= 1 && errors_allowed >= 0 && errors_allowed < m))
        throw std::domain_error("feasibility_check: invalid dimensions");
    assert(H.size() == static_cast<std::size_t>(m) * n);
    if (mode == FeasMode::exact) {
        if (binomial_or_inf(m, errors_allowed) > kSelectorCap)
            throw std::domain_error(
                "feasibility_check: selector count exceeds the exact-mode "
                "cap");
        ExactFeasibility solver(H, m, n, kappa);
        std::vector<int> dropped;
        return solver.search(&dropped, errors_allowed);
    }
    return feasible_greedy(H, m, n, kappa, errors_allowed);
}

std::vector<SweepPoint> capacity_sweep(const McConfig& config,
                                       const std::vector<double>& alpha_grid) {
    std::vector<SweepPoint> out;
    out.reserve(alpha_grid.size());
    for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
        const double alpha = alpha_grid[ai];
        const int m = static_cast<int>(std::lround(alpha * config.n));
        if (m < 1)
            throw std::domain_error("capacity_sweep: alpha * n rounds below 1");
        McConfig cfg = config;
        cfg.m = m;
        const int budget = errors_allowed(cfg);
        const bool exact = binomial_or_inf(m, budget) <= kSelectorCap;
        int successes = 0;
        std::vector<double> H(static_cast<std::size_t>(m) * config.n);
        for (int t = 0; t < config.trials; ++t) {
            // Stream ids keep every (alpha, trial) pair independent.
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(ai + 1) << 32) +
                static_cast<std::uint64_t>(t);
            const GaussianStream rng(config.seed, stream);
            for (std::size_t i = 0; i < H.size(); ++i) H[i] = rng(i);
            successes += feasibility_check(
                             H, m, config.n, config.kappa, budget,
                             exact ? FeasMode::exact : FeasMode::greedy)
                             ? 1
                             : 0;
        }
        const double p = static_cast<double>(successes) / config.trials;
        SweepPoint pt;
        pt.alpha = alpha;
        pt.probability = p;
        pt.std_error = std::sqrt(p * (1.0 - p) / config.trials);
        out.push_back(pt);
    }
    return out;
}

// ----------------------------------------------------------------------------
// Sampled exponential moment
// ----------------------------------------------------------------------------

McReport i_wb_1_sampled(const LiftPoint& point, double kappa,
                        std::int64_t samples, std::uint64_t seed) {
    if (samples < 10000)
        throw std::domain_error("i_wb_1_sampled: requires samples >= 1e4");
    assert(point.c3_s > 0.0 && point.gamma_wb_s > 0.0 && point.nu_wb >= 0.0);
    const double scale = point.c3_s / (4.0 * point.gamma_wb_s);
    const GaussianStream rng(seed, 0);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double g = rng(static_cast<std::uint64_t>(i));
        const double t = std::max(g + kappa, 0.0);
        const double val =
            std::exp(-scale * std::min(0.0, t * t - point.nu_wb));
        sum += val;
        sumsq += val * val;
    }
    McReport rep;
    rep.trials_used = static_cast<int>(
        std::min<std::int64_t>(samples, std::numeric_limits<int>::max()));
    rep.mean = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(samples)) /
                          static_cast<double>(samples - 1));
    rep.std_error = std::sqrt(var / static_cast<double>(samples));
    return rep;
}

}  // namespace percap
