#include "splinewave/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "splinewave/errors.hpp"
#include "splinewave/opcount.hpp"
#include "kernels.hpp"

namespace splinewave {

namespace {

void check_periodic_grid(const std::vector<double>& v, double period) {
    if (period <= 0.0) throw PeriodMismatch("period must be positive");
    if (v.empty()) throw GridTooSmall("periodic grid needs at least one knot");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) throw DecreasingKnots("periodic knots must be strictly increasing");
    if (v.back() - v.front() >= period)
        throw PeriodMismatch("knots of one period must span less than the period");
}

bool value_in_sorted(const std::vector<double>& v, double x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    return it != v.end() && *it == x;
}

/// Largest extended coarse index whose knot value is <= x, for x at or
/// above origin - period.
std::ptrdiff_t periodic_anchor(const std::vector<double>& cv, double x, double period) {
    if (x < cv.front()) {
        auto it = std::upper_bound(cv.begin(), cv.end(), x + period);
        return (it - cv.begin()) - 1 - static_cast<std::ptrdiff_t>(cv.size());
    }
    auto it = std::upper_bound(cv.begin(), cv.end(), x);
    return (it - cv.begin()) - 1;
}

} // namespace

PeriodicSpline make_periodic_spline(int order, std::vector<double> knots, double period,
                                    CoeffMatrix coeffs) {
    if (order < 1) throw OrderUnderflow("spline order must be at least one");
    check_periodic_grid(knots, period);
    if (coeffs.rows() != knots.size())
        throw GridMismatch("periodic splines carry one coefficient row per stored knot");
    return {order, KnotSequence(std::move(knots)), period, std::move(coeffs)};
}

std::vector<double> eval_periodic(const PeriodicSpline& s, double t) {
    const int m = s.order;
    const auto n = s.knots.size();
    const std::size_t nch = s.channels();
    const auto& u = s.knots.values();
    const double P = s.period;

    // fold t into (u_0, u_0 + P]; the wrap cell (u_{n-1}, u_0 + P] closes
    // the circle
    double tau = u.front() + std::fmod(t - u.front(), P);
    if (tau <= u.front()) tau += P;
    const auto cell = static_cast<std::ptrdiff_t>(std::upper_bound(u.begin(), u.end(), tau) -
                                                  u.begin()) -
                      1;

    KnotView kv(u, KnotView::Mode::Periodic, P);
    auto knot = [&](std::ptrdiff_t j) { return kv(j); };
    auto row = [&](std::ptrdiff_t j) -> const double* {
        return s.coeffs.row(periodic_index_map(j, n).base).data();
    };
    std::vector<double> out(nch), work(static_cast<std::size_t>(m) * nch);
    detail::deboor_rows(m, cell, tau, knot, row, nch, out.data(), work.data());
    return out;
}

PeriodicSpline differentiate_periodic(const PeriodicSpline& s) {
    if (s.order < 2) throw OrderUnderflow("cannot lower the order below one");
    const int m = s.order;
    const auto n = s.knots.size();
    const std::size_t nch = s.channels();
    KnotView kv(s.knots.values(), KnotView::Mode::Periodic, s.period);
    CoeffMatrix out(n, nch, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto j = static_cast<std::ptrdiff_t>(k);
        const double den = kv(j + m - 1) - kv(j);
        const double f = static_cast<double>(m - 1) / den;
        const auto prev = periodic_index_map(j - 1, n).base;
        for (std::size_t c = 0; c < nch; ++c)
            out(k, c) = f * (s.coeffs(k, c) - s.coeffs(prev, c));
    }
    opcount::add(3 * n * nch);
    return {m - 1, s.knots, s.period, std::move(out)};
}

PeriodicSpline periodic_refine(const PeriodicSpline& s, const KnotSequence& fine) {
    const int m = s.order;
    const double P = s.period;
    const auto& cv = s.knots.values();
    const auto& fv = fine.values();
    check_periodic_grid(fv, P);
    if (fv.front() > cv.front() || cv.front() - fv.front() > P)
        throw PeriodMismatch("current window must start within one period of the refined origin");
    std::size_t matched = 0;
    for (double v : fv)
        if (value_in_sorted(cv, v) || value_in_sorted(cv, v + P)) ++matched;
    if (matched != cv.size())
        throw NotARefinement("refined period does not contain every current knot");

    const auto n0 = cv.size();
    const auto n1 = fv.size();
    const std::size_t nch = s.channels();
    KnotView C(cv, KnotView::Mode::Periodic, P);
    KnotView F(fv, KnotView::Mode::Periodic, P);
    auto tau = [&](std::ptrdiff_t j) { return C(j); };
    auto fknot = [&](std::ptrdiff_t j) { return F(j); };
    auto crow = [&](std::ptrdiff_t j) -> const double* {
        return s.coeffs.row(periodic_index_map(j, n0).base).data();
    };
    CoeffMatrix out(n1, nch, 0.0);
    std::vector<double> work(static_cast<std::size_t>(m) * nch);
    for (std::size_t i = 0; i < n1; ++i) {
        const std::ptrdiff_t mu = periodic_anchor(cv, fv[i], P);
        detail::oslo_coefficient(m, mu, static_cast<std::ptrdiff_t>(i), tau, fknot, crow, nch,
                                 std::nullopt, out.row(i).data(), work.data());
    }
    return {m, fine, P, std::move(out)};
}

std::pair<CoeffMatrix, CoeffMatrix> periodic_decompose_step(const LevelGrids& level,
                                                            const CoeffMatrix& fine) {
    if (level.mode != BoundaryMode::Periodic)
        throw GridMismatch("this entry point expects a periodic level");
    const int m = level.params.order;
    const double P = level.period;
    const auto n1 = level.fine.size();
    if (fine.rows() != n1)
        throw GridMismatch("fine coefficient rows do not match the fine grid");
    const std::size_t nch = fine.cols();
    const std::size_t w = level.num_wavelets();
    const auto n0 = level.coarse.size();

    PeriodicSpline beta{m, level.fine, P, fine};
    for (int i = 1; i < m; ++i) beta = differentiate_periodic(beta);

    CoeffMatrix details(w, nch, 0.0);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t r = level.new_indices[k];
        const std::size_t rm = r == 0 ? n1 - 1 : r - 1;
        const double rho = level.slots[k].rho_jump;
        for (std::size_t c = 0; c < nch; ++c)
            details(k, c) = (beta.coeffs(r, c) - beta.coeffs(rm, c)) / rho;
    }
    opcount::add(2 * w * nch);

    // smooth part: subtract the detail windows, indices folded into the
    // stored period
    CoeffMatrix smooth = fine;
    for (std::size_t k = 0; k < w; ++k) {
        const WaveletSlot& slot = level.slots[k];
        for (std::size_t i = 0; i < slot.b.size(); ++i) {
            const auto row =
                periodic_index_map(slot.b_offset + static_cast<std::ptrdiff_t>(i), n1).base;
            for (std::size_t c = 0; c < nch; ++c) smooth(row, c) -= details(k, c) * slot.b[i];
        }
        opcount::add(2 * slot.b.size() * nch);
    }

    // Remove the new knots left to right.  Each removal recomputes the
    // band of order-2 rows left of the site and copies every other row
    // with a shift; all index arithmetic folds into the current period.
    std::vector<double> knot_work = level.fine.values();
    CoeffMatrix cur = std::move(smooth);
    for (std::size_t k = 0; k < w; ++k) {
        const auto n = n1 - k;
        const auto n_out = n - 1;
        const auto rho = static_cast<std::ptrdiff_t>(level.new_indices[k] - k);
        KnotView theta_v(knot_work, KnotView::Mode::Periodic, P);
        CoeffMatrix nxt(n_out, nch, 0.0);
        // rows outside the band: p_{rho-1+s} = q_{rho+s} walks the whole
        // circle once, seeding p_{rho-1} = q_rho on the way
        for (std::ptrdiff_t s = 0; s + m <= static_cast<std::ptrdiff_t>(n); ++s) {
            const auto dst = periodic_index_map(rho - 1 + s, n_out).base;
            const auto src = periodic_index_map(rho + s, n).base;
            nxt.assign_row(dst, cur, src);
        }
        auto theta = [&](std::ptrdiff_t j) { return theta_v(j); };
        for (std::size_t c = 0; c < nch; ++c) {
            auto q_at = [&](std::ptrdiff_t j) { return cur(periodic_index_map(j, n).base, c); };
            auto p_get = [&](std::ptrdiff_t j) {
                return nxt(periodic_index_map(j, n_out).base, c);
            };
            auto p_set = [&](std::ptrdiff_t j, double v) {
                nxt(periodic_index_map(j, n_out).base, c) = v;
            };
            detail::removal_backward_sweep<double>(m, rho, theta, q_at, p_get, p_set, rho - m + 1,
                                                   rho - 2);
        }
        cur = std::move(nxt);
        knot_work.erase(knot_work.begin() + rho);
    }

    // the coarse stored window may start at a later knot; rotate rows to
    // its origin
    const auto& cvv = level.coarse.values();
    if (knot_work != cvv) {
        // the coarse origin sits in the remaining window as itself or one
        // period down
        auto locate = [&](double x) -> std::ptrdiff_t {
            auto it = std::lower_bound(knot_work.begin(), knot_work.end(), x);
            if (it != knot_work.end() && *it == x) return it - knot_work.begin();
            return -1;
        };
        std::ptrdiff_t pos = locate(cvv.front());
        if (pos < 0) pos = locate(cvv.front() - P);
        if (pos < 0) throw GridMismatch("removal did not land on the coarse grid");
        const auto shift = static_cast<std::size_t>(pos);
        CoeffMatrix rot(n0, nch, 0.0);
        for (std::size_t j = 0; j < n0; ++j) rot.assign_row(j, cur, (shift + j) % n0);
        cur = std::move(rot);
    }
    return {std::move(cur), std::move(details)};
}

CoeffMatrix periodic_reconstruct_step(const LevelGrids& level, const CoeffMatrix& coarse,
                                      const CoeffMatrix& details) {
    if (level.mode != BoundaryMode::Periodic)
        throw GridMismatch("this entry point expects a periodic level");
    if (coarse.rows() != level.coarse.size())
        throw GridMismatch("coarse coefficient rows do not match the coarse grid");
    if (details.rows() != level.num_wavelets())
        throw GridMismatch("detail rows do not match the wavelet count");
    if (details.cols() != coarse.cols())
        throw GridMismatch("detail channels do not match coefficient channels");
    const std::size_t nch = coarse.cols();
    const auto n1 = level.fine.size();

    PeriodicSpline c{level.params.order, level.coarse, level.period, coarse};
    PeriodicSpline refined = periodic_refine(c, level.fine);
    CoeffMatrix out = std::move(refined.coeffs);
    for (std::size_t k = 0; k < level.num_wavelets(); ++k) {
        const WaveletSlot& slot = level.slots[k];
        for (std::size_t i = 0; i < slot.b.size(); ++i) {
            const auto row =
                periodic_index_map(slot.b_offset + static_cast<std::ptrdiff_t>(i), n1).base;
            for (std::size_t c2 = 0; c2 < nch; ++c2) out(row, c2) += details(k, c2) * slot.b[i];
        }
        opcount::add(2 * slot.b.size() * nch);
    }
    return out;
}

PeriodicDecomposition periodic_decompose(const PeriodicSpline& f, const WaveletParams& params,
                                         int max_levels) {
    if (f.order != params.order)
        throw GridMismatch("spline order does not match the transform order");
    if (max_levels < 0) throw IndexOutOfRange("level count cannot be negative");
    check_periodic_grid(f.knots.values(), f.period);
    if (f.coeffs.rows() != f.knots.size())
        throw GridMismatch("periodic splines carry one coefficient row per stored knot");

    const auto min_knots = static_cast<std::size_t>(params.order + params.dual_order);
    std::vector<std::vector<double>> chain{f.knots.values()};
    for (int l = 0; l < max_levels; ++l) {
        const auto& cur = chain.back();
        std::vector<double> next;
        for (std::size_t i = 0; i < cur.size(); i += 2) next.push_back(cur[i]);
        if (next.size() < min_knots || next.size() == cur.size()) break;
        chain.push_back(std::move(next));
    }

    PeriodicDecomposition out;
    out.params = params;
    out.period = f.period;
    CoeffMatrix current = f.coeffs;
    std::vector<PeriodicDecompositionLevel> levels;
    for (std::size_t l = 0; l + 1 < chain.size(); ++l) {
        LevelGrids grids = build_level(params, BoundaryMode::Periodic, KnotSequence(chain[l + 1]),
                                       KnotSequence(chain[l]), f.period);
        auto [coarse, details] = periodic_decompose_step(grids, current);
        current = std::move(coarse);
        levels.push_back(PeriodicDecompositionLevel{std::move(grids), std::move(details)});
    }
    std::reverse(levels.begin(), levels.end());
    out.levels = std::move(levels);
    out.base_knots = KnotSequence(chain.back());
    out.base_coeffs = std::move(current);
    return out;
}

PeriodicSpline periodic_reconstruct(const PeriodicDecomposition& decomp) {
    CoeffMatrix current = decomp.base_coeffs;
    const KnotSequence* grid = &decomp.base_knots;
    for (const auto& level : decomp.levels) {
        if (level.grids.coarse.values() != grid->values())
            throw GridMismatch("level chain is not contiguous");
        current = periodic_reconstruct_step(level.grids, current, level.details);
        grid = &level.grids.fine;
    }
    return {decomp.params.order, *grid, decomp.period, std::move(current)};
}

} // namespace splinewave
