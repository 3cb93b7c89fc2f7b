#include "splinewave/interval.hpp"

#include <cstddef>

#include "splinewave/errors.hpp"

namespace splinewave {

std::vector<double> interval_knots(int order, const std::vector<double>& breaks) {
    if (order < 1) throw OrderUnderflow("spline order must be at least one");
    if (breaks.size() < 2) throw GridTooSmall("an interval needs at least two break values");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (breaks[i] <= breaks[i - 1])
            throw DecreasingKnots("break values must be strictly increasing");
    std::vector<double> g;
    g.reserve(breaks.size() + 2 * static_cast<std::size_t>(order - 1));
    for (int i = 1; i < order; ++i) g.push_back(breaks.front());
    g.insert(g.end(), breaks.begin(), breaks.end());
    for (int i = 1; i < order; ++i) g.push_back(breaks.back());
    return g;
}

std::vector<double> interval_breaks(int order, const KnotSequence& knots) {
    const auto mu = static_cast<std::size_t>(order);
    const auto n = knots.size();
    if (order < 1) throw OrderUnderflow("spline order must be at least one");
    if (n < 2 * mu) throw GridTooSmall("interval grid shorter than twice the order");
    for (std::size_t i = 1; i < mu; ++i)
        if (knots[i] != knots[0])
            throw GridMismatch("interval grid must open with order-fold boundary knots");
    for (std::size_t i = n - mu; i + 1 < n; ++i)
        if (knots[i] != knots[n - 1])
            throw GridMismatch("interval grid must close with order-fold boundary knots");
    std::vector<double> breaks(knots.values().begin() + (mu - 1), knots.values().end() - (mu - 1));
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (breaks[i] <= breaks[i - 1])
            throw GridMismatch("interval grid must have strictly increasing breaks");
    return breaks;
}

bool is_interval_grid(int order, const KnotSequence& knots) {
    try {
        interval_breaks(order, knots);
        return true;
    } catch (const Error&) {
        return false;
    }
}

Spline make_interval_spline(int order, const std::vector<double>& breaks, CoeffMatrix coeffs) {
    return make_spline(order, interval_knots(order, breaks), std::move(coeffs));
}

} // namespace splinewave
