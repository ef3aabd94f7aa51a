#ifndef PERCAP_SRC_SCALAR_OPT_HPP
#define PERCAP_SRC_SCALAR_OPT_HPP

// ============================================================================
// Internal scalar optimization helpers: logarithmic grids, golden-section
// refinement, and bracketed bisection.  The bound objectives are smooth but
// not certified unimodal, so every optimizer here is grid-seeded and the
// refinement only trusts a local bracket.
// ============================================================================

#include <cassert>
#include <cmath>
#include <vector>

namespace percap::detail {

inline std::vector<double> log_grid(double lo, double hi, int count) {
    assert(lo > 0.0 && hi > lo && count >= 2);
    std::vector<double> g(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

// Golden-section maximization on [a, b]; returns the midpoint of the final
// bracket.  tol is absolute in the argument (scaled by max(1,|x|) by the
// caller if desired).
template <typename F>
double golden_max(F&& f, double a, double b, double tol, int max_iter = 200) {
    const double invphi = 0.6180339887498949;  // (sqrt(5)-1)/2
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

template <typename F>
double golden_min(F&& f, double a, double b, double tol, int max_iter = 200) {
    return golden_max([&](double x) { return -f(x); }, a, b, tol, max_iter);
}

// Bisection for the smallest x in [lo, hi] with pred(x) true, assuming pred
// is monotone (false below the threshold, true above).  Requires
// pred(hi) == true; pred(lo) may be true (returns lo).  rel_tol is relative
// on the bracket width.  iterations reports the bisection count.
template <typename Pred>
double bisect_threshold(Pred&& pred, double lo, double hi, double rel_tol,
                        int* iterations = nullptr) {
    assert(lo < hi);
    int it = 0;
    if (pred(lo)) {
        if (iterations) *iterations = 0;
        return lo;
    }
    while ((hi - lo) > rel_tol * hi && it < 200) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
        ++it;
    }
    if (iterations) *iterations = it;
    return hi;
}

}  // namespace percap::detail

#endif  // PERCAP_SRC_SCALAR_OPT_HPP
