#include "splinewave/knots.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace splinewave {

std::size_t KnotSequence::find_interval(double t) const {
    if (knots_.size() < 2 || t < knots_.front() || t > knots_.back())
        throw OutOfSupport("evaluation point outside the knot span");
    if (t == knots_.front()) {
        // Closure at the minimum: use the first nonempty interval.
        std::size_t i = 0;
        while (i + 1 < knots_.size() && knots_[i + 1] == knots_.front()) ++i;
        return i;
    }
    // First knot >= t, then step one left: knots_[i] < t <= knots_[i+1].
    auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

void validate_knots(const KnotSequence& knots, int order) {
    const auto& v = knots.values();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1]) throw DecreasingKnots("knot sequence must be nondecreasing");

    const std::size_t m = static_cast<std::size_t>(order);
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= v.size(); ++i) {
        if (i == v.size() || v[i] != v[run_start]) {
            std::size_t mult = i - run_start;
            bool boundary = (run_start == 0) || (i == v.size());
            // interior cap m-1 keeps splines continuous; order 1 has no
            // continuity to protect, so simple knots must stay legal
            std::size_t cap = boundary ? m : std::max<std::size_t>(m - 1, 1);
            if (mult > cap) {
                std::ostringstream os;
                os << "knot " << v[run_start] << " has multiplicity " << mult
                   << ", at most " << cap << " allowed "
                   << (boundary ? "at a boundary" : "in the interior")
                   << " for order " << order;
                throw ExcessMultiplicity(os.str());
            }
            run_start = i;
        }
    }
}

bool is_refinement(const KnotSequence& coarse, const KnotSequence& fine) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        while (j < fine.size() && fine[j] < coarse[i]) ++j;
        if (j == fine.size() || fine[j] != coarse[i]) return false;
        ++j;
    }
    return true;
}

KnotView::KnotView(const double* data, std::size_t n, Mode mode, double period)
    : data_(data), n_(n), mode_(mode), period_(period) {
    assert(n_ >= 2);
    if (mode_ == Mode::Extend) {
        step_lo_ = data_[1] - data_[0];
        step_hi_ = data_[n_ - 1] - data_[n_ - 2];
        // A degenerate first/last interval (boundary multiplicity) falls
        // back to the total span so extension stays strictly monotone.
        double span = data_[n_ - 1] - data_[0];
        if (step_lo_ <= 0.0) step_lo_ = span > 0.0 ? span : 1.0;
        if (step_hi_ <= 0.0) step_hi_ = span > 0.0 ? span : 1.0;
    }
}

double KnotView::operator()(std::ptrdiff_t j) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
    switch (mode_) {
    case Mode::Plain:
        assert(j >= 0 && j < n);
        return data_[j];
    case Mode::Extend:
        if (j < 0) return data_[0] + static_cast<double>(j) * step_lo_;
        if (j >= n) return data_[n_ - 1] + static_cast<double>(j - n + 1) * step_hi_;
        return data_[j];
    case Mode::Periodic: {
        WrappedIndex w = periodic_index_map(j, n_);
        return data_[w.base] + static_cast<double>(w.wraps) * period_;
    }
    }
    return 0.0; // unreachable
}

WrappedIndex periodic_index_map(std::ptrdiff_t index, std::size_t n) {
    assert(n > 0);
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    std::ptrdiff_t base = index % sn;
    std::ptrdiff_t wraps = index / sn;
    if (base < 0) {
        base += sn;
        wraps -= 1;
    }
    return {static_cast<std::size_t>(base), wraps};
}

} // namespace splinewave
