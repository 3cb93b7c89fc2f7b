#include "splinewave/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include "splinewave/errors.hpp"

namespace splinewave {

namespace {

std::ptrdiff_t factorial(int n) {
    std::ptrdiff_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void check_params(const WaveletParams& p) {
    if (p.order < 2) throw OrderUnderflow("wavelet transforms need order at least 2");
    if (p.dual_order < 1) throw OrderUnderflow("at least one vanishing moment is required");
}

/// Indices of fine knots not matched by a coarse knot (plain multiset
/// difference; assumes is_refinement already passed).
std::vector<std::size_t> multiset_new_indices(const KnotSequence& coarse,
                                              const KnotSequence& fine) {
    std::vector<std::size_t> out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        if (j < coarse.size() && coarse[j] == fine[i]) {
            ++j;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

bool value_in_sorted(const std::vector<double>& v, double x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    return it != v.end() && *it == x;
}

/// Builds one slot from materialized windows.  C/F are signed accessors
/// for coarse/fine knot values; [wlo, whi] the coarse window, p the anchor
/// (last coarse index with value <= x), [blk_lo, blk_hi] the fine block
/// whose values cover the window.
WaveletSlot build_slot(const WaveletParams& params, double x, std::ptrdiff_t r,
                       const std::function<double(std::ptrdiff_t)>& C,
                       const std::function<double(std::ptrdiff_t)>& F, std::ptrdiff_t wlo,
                       std::ptrdiff_t whi, std::ptrdiff_t p, std::ptrdiff_t blk_lo,
                       std::ptrdiff_t blk_hi) {
    const int m = params.order;
    const int mt = params.dual_order;

    WaveletSlot slot;
    slot.new_value = x;
    slot.new_fine_index = r;
    slot.b_offset = blk_lo;
    slot.new_pos = static_cast<std::size_t>(p - wlo + 1);

    slot.xi.reserve(static_cast<std::size_t>(whi - wlo + 2));
    for (std::ptrdiff_t j = wlo; j <= p; ++j) slot.xi.push_back(C(j));
    slot.xi.push_back(x);
    for (std::ptrdiff_t j = p + 1; j <= whi; ++j) slot.xi.push_back(C(j));

    std::vector<double> block;
    block.reserve(static_cast<std::size_t>(blk_hi - blk_lo + 1));
    for (std::ptrdiff_t j = blk_lo; j <= blk_hi; ++j) block.push_back(F(j));

    // Prototype: order m+mt B-spline on xi, differentiated mt times.  The
    // mt-fold derivative of a compactly supported spline has mt vanishing
    // moments (integrate by parts; boundary terms vanish).
    Spline proto = make_spline(m + mt, slot.xi, CoeffMatrix(1, 1, 1.0));
    for (int i = 0; i < mt; ++i) proto = differentiate(proto);

    Spline on_fine = oslo_refine(proto, KnotSequence(block));
    double peak = on_fine.coeffs.max_abs();
    if (peak <= 0.0)
        throw ZeroGamma("wavelet prototype vanished after refinement");
    slot.alpha = 1.0 / peak;

    slot.b.resize(on_fine.coeffs.rows());
    for (std::size_t i = 0; i < slot.b.size(); ++i) slot.b[i] = slot.alpha * on_fine.coeffs(i, 0);

    slot.xi_coeffs = proto.coeffs;
    for (std::size_t i = 0; i < slot.xi_coeffs.rows(); ++i)
        slot.xi_coeffs.scale_row(i, slot.alpha);

    // Jump of the (m-1)-fold derivative at the new knot: run the same
    // order-lowering pipeline the transform uses, so the detail extraction
    // divides two values produced by identical arithmetic.
    Spline piece = proto;
    for (int i = 0; i < m - 1; ++i) piece = differentiate(piece);
    const double raw_jump = piece.coeffs(slot.new_pos, 0) - piece.coeffs(slot.new_pos - 1, 0);
    if (raw_jump == 0.0) throw ZeroGamma("wavelet has no derivative jump at its knot");
    slot.rho_jump = slot.alpha * raw_jump;
    slot.gamma = slot.rho_jump / static_cast<double>(factorial(m - 1));
    return slot;
}

} // namespace

std::vector<double> phantom_extension(const std::vector<double>& knots, int lo, int hi) {
    if (knots.size() < 2) throw GridMismatch("need at least two knots to extend");
    const double a = knots.front(), b = knots.back();
    double step_lo = knots[1] - a;
    double step_hi = b - knots[knots.size() - 2];
    if (step_lo <= 0.0) step_lo = b - a;
    if (step_hi <= 0.0) step_hi = b - a;
    if (step_lo <= 0.0) step_lo = 1.0;
    if (step_hi <= 0.0) step_hi = 1.0;
    std::vector<double> out;
    out.reserve(knots.size() + static_cast<std::size_t>(lo + hi));
    for (int i = lo; i >= 1; --i) out.push_back(a - i * step_lo);
    out.insert(out.end(), knots.begin(), knots.end());
    for (int i = 1; i <= hi; ++i) out.push_back(b + i * step_hi);
    return out;
}

LevelGrids build_level(const WaveletParams& params, BoundaryMode mode, KnotSequence coarse,
                       KnotSequence fine, double period) {
    check_params(params);
    const int m = params.order;
    const int mt = params.dual_order;
    const int l1 = params.ell1(), l2 = params.ell2();

    LevelGrids level;
    level.params = params;
    level.mode = mode;
    level.period = period;

    if (mode == BoundaryMode::Periodic) {
        if (period <= 0.0) throw PeriodMismatch("period must be positive");
        for (const KnotSequence* g : {&coarse, &fine}) {
            const auto& v = g->values();
            if (v.size() < 1) throw GridTooSmall("periodic grid needs at least one knot");
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] <= v[i - 1])
                    throw DecreasingKnots("periodic knots must be strictly increasing");
            if (v.back() - v.front() >= period)
                throw PeriodMismatch("knots of one period must span less than the period");
        }
        // coarse values must match fine values as v or v + period, which
        // pins the coarse window to within one period above the fine one
        if (fine.front() > coarse.front() || coarse.front() - fine.front() > period)
            throw PeriodMismatch("coarse window must start within one period of the fine origin");
        if (coarse.size() < static_cast<std::size_t>(m + mt))
            throw GridTooSmall("periodic wavelets need at least order + dual_order knots per period");

        // containment and new-knot detection modulo the period
        const auto& cv = coarse.values();
        const auto& fv = fine.values();
        std::size_t matched = 0;
        for (std::size_t i = 0; i < fv.size(); ++i) {
            const double v = fv[i];
            if (value_in_sorted(cv, v) || value_in_sorted(cv, v + period)) {
                ++matched;
            } else {
                level.new_indices.push_back(i);
            }
        }
        if (matched != cv.size())
            throw NotARefinement("fine period does not contain every coarse knot");
    } else {
        validate_knots(coarse, m);
        validate_knots(fine, m);
        if (!is_refinement(coarse, fine))
            throw NotARefinement("fine knots do not contain the coarse knots");
        level.new_indices = multiset_new_indices(coarse, fine);
        for (std::size_t idx : level.new_indices)
            if (value_in_sorted(coarse.values(), fine[idx]))
                throw GridMismatch(
                    "a refinement knot repeats a coarse knot value; detail extraction "
                    "needs new knots at new values");
        if (mode == BoundaryMode::Interval) {
            auto check_full_boundary = [&](const KnotSequence& g, const char* which) {
                const std::size_t n = g.size();
                if (n < 2 * static_cast<std::size_t>(m))
                    throw GridTooSmall("interval grid shorter than twice the order");
                const auto mu = static_cast<std::size_t>(m);
                if (g[0] != g[mu - 1] || (n > mu && g[mu] == g[mu - 1]))
                    throw GridMismatch(std::string(which) +
                                       " grid must open with exactly order-fold boundary knots");
                if (g[n - mu] != g[n - 1] || (n > mu && g[n - mu - 1] == g[n - mu]))
                    throw GridMismatch(std::string(which) +
                                       " grid must close with exactly order-fold boundary knots");
            };
            check_full_boundary(coarse, "coarse");
            check_full_boundary(fine, "fine");
            const auto n_breaks = static_cast<std::ptrdiff_t>(coarse.size()) - 2 * m + 1;
            const std::ptrdiff_t min_breaks = std::max<std::ptrdiff_t>(1, mt - m + 3);
            if (n_breaks < min_breaks)
                throw GridTooSmall("coarse interval grid has too few cells for these orders");
        }
    }

    const auto csize = static_cast<std::ptrdiff_t>(coarse.size());
    KnotView cper(coarse.values(), KnotView::Mode::Periodic, period);
    KnotView fper(fine.values(), KnotView::Mode::Periodic, period);
    std::function<double(std::ptrdiff_t)> C, F;
    if (mode == BoundaryMode::Periodic) {
        C = [cper](std::ptrdiff_t j) { return cper(j); };
        F = [fper](std::ptrdiff_t j) { return fper(j); };
    } else {
        const KnotSequence& cref = coarse;
        const KnotSequence& fref = fine;
        C = [&cref](std::ptrdiff_t j) { return cref[static_cast<std::size_t>(j)]; };
        F = [&fref](std::ptrdiff_t j) { return fref[static_cast<std::size_t>(j)]; };
    }

    level.slots.reserve(level.new_indices.size());
    for (std::size_t idx : level.new_indices) {
        const double x = fine[idx];

        // anchor: last (signed) coarse index with value <= x
        std::ptrdiff_t p;
        {
            const auto& cv = coarse.values();
            if (mode == BoundaryMode::Periodic && x < cv.front()) {
                auto it = std::upper_bound(cv.begin(), cv.end(), x + period);
                p = (it - cv.begin()) - 1 - csize;
            } else {
                auto it = std::upper_bound(cv.begin(), cv.end(), x);
                p = (it - cv.begin()) - 1;
            }
        }

        std::ptrdiff_t wlo = p + 1 - l1;
        std::ptrdiff_t whi = p + l2;
        if (mode == BoundaryMode::WholeLine) {
            if (wlo < 0 || whi > csize - 1)
                throw KnotOutOfRange(
                    "refinement knot too close to the end of the extended grid");
        } else if (mode == BoundaryMode::Interval) {
            // Shift the window off the outermost boundary copies so the
            // prototype keeps a zero of order dual_order + 1 at the ends,
            // which preserves the vanishing moments on the interval.
            if (wlo < 1) {
                wlo = 1;
                whi = m + mt;
            } else if (whi > csize - 2) {
                whi = csize - 2;
                wlo = csize - 1 - (m + mt);
            }
        }

        // fine block covering the window values (scan outward from the
        // new knot; for periodic grids the indices may leave [0, n))
        const double lo_val = C(wlo), hi_val = C(whi);
        std::ptrdiff_t blk_lo = static_cast<std::ptrdiff_t>(idx);
        std::ptrdiff_t blk_hi = static_cast<std::ptrdiff_t>(idx);
        if (mode == BoundaryMode::Periodic) {
            while (F(blk_lo - 1) >= lo_val) --blk_lo;
            while (F(blk_hi + 1) <= hi_val) ++blk_hi;
        } else {
            const auto fsize = static_cast<std::ptrdiff_t>(fine.size());
            while (blk_lo - 1 >= 0 && F(blk_lo - 1) >= lo_val) --blk_lo;
            while (blk_hi + 1 <= fsize - 1 && F(blk_hi + 1) <= hi_val) ++blk_hi;
        }

        level.slots.push_back(build_slot(params, x, static_cast<std::ptrdiff_t>(idx), C, F, wlo,
                                         whi, p, blk_lo, blk_hi));
    }

    level.coarse = std::move(coarse);
    level.fine = std::move(fine);
    return level;
}

double eval_wavelet(const LevelGrids& level, std::size_t k, double t) {
    if (k >= level.slots.size()) throw IndexOutOfRange("wavelet index out of range");
    const WaveletSlot& slot = level.slots[k];
    auto one = [&](double u) -> double {
        if (u <= slot.xi.front() || u > slot.xi.back()) return 0.0;
        Spline s{level.params.order, KnotSequence(slot.xi), slot.xi_coeffs};
        return eval_spline(s, u)[0];
    };
    if (level.mode != BoundaryMode::Periodic) return one(t);
    // The support spans less than one period, so exactly one period image
    // of t can land inside it.
    double u = slot.xi.front() + std::fmod(t - slot.xi.front(), level.period);
    if (u <= slot.xi.front()) u += level.period;
    return one(u);
}

} // namespace splinewave
