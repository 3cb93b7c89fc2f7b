#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"

namespace testhelp {

/// Strictly increasing grid of `count` knots starting at `start`, spacing
/// drawn uniformly from [lo, hi].  lo > 0 keeps every cell nonempty.
inline std::vector<double> random_grid(std::mt19937& rng, std::size_t count, double start = 0.0,
                                       double lo = 0.5, double hi = 1.5) {
    std::uniform_real_distribution<double> gap(lo, hi);
    std::vector<double> g(count);
    double t = start;
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = t;
        t += gap(rng);
    }
    return g;
}

/// Interval-style grid: m-fold first/last knots around strictly increasing
/// interior breakpoints.
inline std::vector<double> random_interval_grid(std::mt19937& rng, int order,
                                                std::size_t interior, double start = 0.0,
                                                double lo = 0.5, double hi = 1.5) {
    std::vector<double> breaks = random_grid(rng, interior + 2, start, lo, hi);
    std::vector<double> g;
    for (int i = 0; i < order; ++i) g.push_back(breaks.front());
    for (std::size_t i = 1; i + 1 < breaks.size(); ++i) g.push_back(breaks[i]);
    for (int i = 0; i < order; ++i) g.push_back(breaks.back());
    return g;
}

inline splinewave::CoeffMatrix random_coeffs(std::mt19937& rng, std::size_t rows,
                                             std::size_t cols = 1) {
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    splinewave::CoeffMatrix c(rows, cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t ch = 0; ch < cols; ++ch) c(r, ch) = val(rng);
    return c;
}

inline splinewave::Spline random_spline(std::mt19937& rng, int order, std::size_t num_knots,
                                        std::size_t channels = 1) {
    auto g = random_grid(rng, num_knots);
    auto c = random_coeffs(rng, num_knots - static_cast<std::size_t>(order), channels);
    return splinewave::make_spline(order, std::move(g), std::move(c));
}

/// Largest pointwise |a - b| over `n` evaluation sites uniformly covering
/// [lo, hi], all channels.
inline double max_eval_diff(const splinewave::Spline& a, const splinewave::Spline& b, double lo,
                            double hi, int n = 200) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = (i == n) ? hi : lo + (hi - lo) * i / n;
        auto va = splinewave::eval_spline(a, t);
        auto vb = splinewave::eval_spline(b, t);
        for (std::size_t c = 0; c < va.size(); ++c)
            worst = std::max(worst, std::abs(va[c] - vb[c]));
    }
    return worst;
}

} // namespace testhelp
