#pragma once

#include <cstddef>
#include <vector>

#include "splinewave/errors.hpp"

namespace splinewave {

/// Ordered knot sequence.
///
/// Conventions used throughout the library:
///  - intervals are half open, (t_i, t_{i+1}]; the value of a piecewise
///    function at a knot comes from the interval to the knot's left.  The
///    global minimum is the one exception: it is folded into the first
///    nonempty interval so closed spans [a, b] evaluate at a.
///  - coefficient k pairs with the B-spline of order m supported on
///    [t_k, t_{k+m}], so a sequence of K knots carries K - m basis
///    functions.
class KnotSequence {
public:
    KnotSequence() = default;
    explicit KnotSequence(std::vector<double> knots) : knots_(std::move(knots)) {}

    std::size_t size() const { return knots_.size(); }
    bool empty() const { return knots_.empty(); }
    double operator[](std::size_t i) const { return knots_[i]; }
    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }

    const std::vector<double>& values() const { return knots_; }

    bool operator==(const KnotSequence& o) const { return knots_ == o.knots_; }

    /// Index i of the interval (t_i, t_{i+1}] containing t, with the
    /// global-minimum closure described above.  Throws OutOfSupport when t
    /// lies outside [front, back].
    std::size_t find_interval(double t) const;

    /// Number of basis functions of the given order, zero if the sequence
    /// is too short.
    std::size_t num_basis(int order) const {
        return size() > static_cast<std::size_t>(order)
                   ? size() - static_cast<std::size_t>(order)
                   : 0;
    }

private:
    std::vector<double> knots_;
};

/// Validates a knot sequence for use with splines of the given order:
/// nondecreasing, interior multiplicity at most order-1, boundary
/// multiplicity at most order.  Throws DecreasingKnots or
/// ExcessMultiplicity.
void validate_knots(const KnotSequence& knots, int order);

/// True when `fine` contains every knot of `coarse`, counting multiplicity.
bool is_refinement(const KnotSequence& coarse, const KnotSequence& fine);

/// Read-only signed-index view of a knot array.  Three behaviours outside
/// the stored range:
///  - Plain: out-of-range access is a logic error (asserted in debug).
///  - Extend: continue with the spacing of the first/last interval.  Exact
///    for compactly supported splines, whose coefficients beyond the array
///    vanish, because the weight attached to any stored coefficient only
///    involves stored knots.
///  - Periodic: knot(j + n) = knot(j) + period.
class KnotView {
public:
    enum class Mode { Plain, Extend, Periodic };

    KnotView(const double* data, std::size_t n, Mode mode, double period = 0.0);
    explicit KnotView(const KnotSequence& seq, Mode mode = Mode::Plain)
        : KnotView(seq.values().data(), seq.size(), mode) {}
    KnotView(const std::vector<double>& v, Mode mode, double period = 0.0)
        : KnotView(v.data(), v.size(), mode, period) {}

    double operator()(std::ptrdiff_t j) const;

    std::size_t size() const { return n_; }
    double period() const { return period_; }
    Mode mode() const { return mode_; }

    /// Smallest stored knot value (period reduction uses it as the origin).
    double origin() const { return data_[0]; }

private:
    const double* data_;
    std::size_t n_;
    Mode mode_;
    double period_;
    double step_lo_ = 0.0;
    double step_hi_ = 0.0;
};

/// Floor division and remainder: index = base + wraps * n with
/// 0 <= base < n.  Used for all periodic index arithmetic.
struct WrappedIndex {
    std::size_t base;
    std::ptrdiff_t wraps;
};
WrappedIndex periodic_index_map(std::ptrdiff_t index, std::size_t n);

} // namespace splinewave
