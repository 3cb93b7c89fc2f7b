#include "splinewave/transform.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

#include "splinewave/errors.hpp"
#include "splinewave/opcount.hpp"
#include "kernels.hpp"

namespace splinewave {

namespace {

void require_nonperiodic(const LevelGrids& level) {
    if (level.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic transforms have separate entry points");
}

/// Order-1 coefficient rows of the (order-1)-fold derivative.
Spline beta_pipeline(const LevelGrids& level, const CoeffMatrix& fine) {
    Spline f{level.params.order, level.fine, fine};
    for (int i = 1; i < level.params.order; ++i) f = differentiate(f);
    return f;
}

void check_fine_shape(const LevelGrids& level, const CoeffMatrix& fine) {
    if (fine.rows() != level.fine.num_basis(level.params.order))
        throw GridMismatch("fine coefficient rows do not match the fine grid");
}

/// details(k, c) = jump of the top derivative at the k-th new knot,
/// divided by the same jump of the unit wavelet.
CoeffMatrix extract_details(const LevelGrids& level, const Spline& beta) {
    const std::size_t nch = beta.channels();
    CoeffMatrix details(level.num_wavelets(), nch, 0.0);
    for (std::size_t k = 0; k < level.num_wavelets(); ++k) {
        const std::size_t r = level.new_indices[k];
        const double rho = level.slots[k].rho_jump;
        for (std::size_t c = 0; c < nch; ++c)
            details(k, c) = (beta.coeffs(r, c) - beta.coeffs(r - 1, c)) / rho;
    }
    opcount::add(2 * level.num_wavelets() * nch);
    return details;
}

} // namespace

CoeffMatrix detail_coefficients(const LevelGrids& level, const CoeffMatrix& fine) {
    require_nonperiodic(level);
    check_fine_shape(level, fine);
    return extract_details(level, beta_pipeline(level, fine));
}

std::pair<CoeffMatrix, CoeffMatrix> decompose_step(const LevelGrids& level,
                                                   const CoeffMatrix& fine) {
    require_nonperiodic(level);
    check_fine_shape(level, fine);
    const int m = level.params.order;
    const std::size_t nch = fine.cols();
    const auto nb_fine = static_cast<std::ptrdiff_t>(fine.rows());
    const std::size_t w = level.num_wavelets();
    const auto nb_coarse = static_cast<std::ptrdiff_t>(level.coarse.num_basis(m));
    assert(nb_fine == nb_coarse + static_cast<std::ptrdiff_t>(w));

    CoeffMatrix details = extract_details(level, beta_pipeline(level, fine));

    // smooth part: subtract each detail window
    CoeffMatrix smooth = fine;
    for (std::size_t k = 0; k < w; ++k) {
        const WaveletSlot& slot = level.slots[k];
        for (std::size_t i = 0; i < slot.b.size(); ++i) {
            const auto row = static_cast<std::size_t>(slot.b_offset) + i;
            for (std::size_t c = 0; c < nch; ++c) smooth(row, c) -= details(k, c) * slot.b[i];
        }
        opcount::add(2 * slot.b.size() * nch);
    }

    // Remove the new knots left to right in one streaming pass.  After k
    // removals the live coefficient vector is never materialized: rows
    // below `done` are final and sit in `out`, the freshest band sits in
    // `carry` (at most order-2 rows), and every other row equals
    // smooth[row + k] because each removal shifts only the rows right of
    // its site.  A row is finalized once it lies strictly below every
    // later band, so no later step can read, move, or drop it.
    CoeffMatrix out(static_cast<std::size_t>(nb_coarse), nch, 0.0);
    KnotView fine_ext(level.fine, KnotView::Mode::Extend);
    std::vector<double> carry, scratch, next_carry;
    std::ptrdiff_t carry_lo = 0, carry_hi = -1; // stage-k rows [carry_lo, carry_hi]
    std::ptrdiff_t done = 0;
    for (std::size_t k = 0; k < w; ++k) {
        const auto nb_in = nb_fine - static_cast<std::ptrdiff_t>(k);
        const auto nb_out = nb_in - 1;
        const auto rho = static_cast<std::ptrdiff_t>(level.new_indices[k]) -
                         static_cast<std::ptrdiff_t>(k);
        auto current = [&](std::ptrdiff_t j, std::size_t c) -> double {
            if (j < 0 || j >= nb_in) return 0.0;
            if (j < done) return out(static_cast<std::size_t>(j), c);
            if (j >= carry_lo && j <= carry_hi)
                return carry[static_cast<std::size_t>(j - carry_lo) * nch + c];
            return smooth(static_cast<std::size_t>(j) + k, c);
        };
        auto theta = [&](std::ptrdiff_t j) -> double {
            if (j < rho) return level.coarse[static_cast<std::size_t>(j)];
            return fine_ext(j + static_cast<std::ptrdiff_t>(k));
        };
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, rho - m + 1);
        const std::ptrdiff_t hi = std::min(rho - 2, nb_out - 1);

        scratch.assign(static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, hi - lo + 1)) * nch,
                       0.0);
        for (std::size_t c = 0; c < nch; ++c) {
            auto q_at = [&](std::ptrdiff_t j) { return current(j, c); };
            auto p_get = [&](std::ptrdiff_t j) -> double {
                if (j >= lo && j <= hi) return scratch[static_cast<std::size_t>(j - lo) * nch + c];
                if (j >= nb_out) return 0.0;
                // right of the band the removal is a plain shift
                return current(j + 1, c);
            };
            auto p_set = [&](std::ptrdiff_t j, double v) {
                if (j >= lo && j <= hi) scratch[static_cast<std::size_t>(j - lo) * nch + c] = v;
            };
            detail::removal_backward_sweep<double>(m, rho, theta, q_at, p_get, p_set, lo, hi);
        }

        // post-removal row j: band rows from scratch, rows right of the
        // band shifted by one, rows left of the band unchanged
        auto next_val = [&](std::ptrdiff_t j, std::size_t c) -> double {
            if (j >= lo && j <= hi) return scratch[static_cast<std::size_t>(j - lo) * nch + c];
            if (j > hi) return current(j + 1, c);
            return current(j, c);
        };

        // rows strictly below the next band can never change again
        const std::ptrdiff_t next_lo =
            (k + 1 < w)
                ? static_cast<std::ptrdiff_t>(level.new_indices[k + 1]) -
                      static_cast<std::ptrdiff_t>(k + 1) - m + 1
                : nb_coarse;
        const std::ptrdiff_t flush_end = std::min(std::max(next_lo, done), nb_coarse);

        next_carry.assign(
            static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, hi - flush_end + 1)) * nch, 0.0);
        for (std::ptrdiff_t j = flush_end; j <= hi; ++j)
            for (std::size_t c = 0; c < nch; ++c)
                next_carry[static_cast<std::size_t>(j - flush_end) * nch + c] = next_val(j, c);
        for (std::ptrdiff_t j = done; j < flush_end; ++j)
            for (std::size_t c = 0; c < nch; ++c)
                out(static_cast<std::size_t>(j), c) = next_val(j, c);

        carry.swap(next_carry);
        carry_lo = flush_end;
        carry_hi = hi;
        done = flush_end;
    }
    for (std::ptrdiff_t j = done; j < nb_coarse; ++j)
        for (std::size_t c = 0; c < nch; ++c)
            out(static_cast<std::size_t>(j), c) = smooth(static_cast<std::size_t>(j) + w, c);

    return {std::move(out), std::move(details)};
}

CoeffMatrix reconstruct_step(const LevelGrids& level, const CoeffMatrix& coarse,
                             const CoeffMatrix& details) {
    require_nonperiodic(level);
    const int m = level.params.order;
    if (coarse.rows() != level.coarse.num_basis(m))
        throw GridMismatch("coarse coefficient rows do not match the coarse grid");
    if (details.rows() != level.num_wavelets())
        throw GridMismatch("detail rows do not match the wavelet count");
    if (details.cols() != coarse.cols())
        throw GridMismatch("detail channels do not match coefficient channels");
    const std::size_t nch = coarse.cols();

    Spline on_fine = oslo_refine(Spline{m, level.coarse, coarse}, level.fine);
    CoeffMatrix out = std::move(on_fine.coeffs);
    for (std::size_t k = 0; k < level.num_wavelets(); ++k) {
        const WaveletSlot& slot = level.slots[k];
        for (std::size_t i = 0; i < slot.b.size(); ++i) {
            const auto row = static_cast<std::size_t>(slot.b_offset) + i;
            for (std::size_t c = 0; c < nch; ++c) out(row, c) += details(k, c) * slot.b[i];
        }
        opcount::add(2 * slot.b.size() * nch);
    }
    return out;
}

std::vector<double> dyadic_coarsen_knots(const std::vector<double>& knots, BoundaryMode mode,
                                         int order) {
    if (mode == BoundaryMode::WholeLine) {
        if (knots.size() <= 2) return knots;
        std::vector<double> out;
        for (std::size_t i = 0; i < knots.size(); i += 2) out.push_back(knots[i]);
        if (out.back() != knots.back()) out.push_back(knots.back());
        return out;
    }
    if (mode == BoundaryMode::Periodic) {
        if (knots.size() <= 1) return knots;
        std::vector<double> out;
        for (std::size_t i = 0; i < knots.size(); i += 2) out.push_back(knots[i]);
        return out;
    }
    // Interval grids coarsen on their break sequence and keep the full
    // boundary multiplicity.
    const auto mu = static_cast<std::size_t>(order);
    if (knots.size() < 2 * mu) throw GridTooSmall("interval grid shorter than twice the order");
    std::vector<double> breaks(knots.begin() + (mu - 1), knots.end() - (mu - 1));
    if (breaks.size() <= 2) return knots;
    std::vector<double> cb;
    for (std::size_t i = 0; i < breaks.size(); i += 2) cb.push_back(breaks[i]);
    if (cb.back() != breaks.back()) cb.push_back(breaks.back());
    std::vector<double> out;
    for (std::size_t i = 1; i < mu; ++i) out.push_back(cb.front());
    out.insert(out.end(), cb.begin(), cb.end());
    for (std::size_t i = 1; i < mu; ++i) out.push_back(cb.back());
    return out;
}

namespace {

void require_strictly_increasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1])
            throw GridMismatch(std::string("pyramid decomposition needs strictly increasing ") +
                               what);
}

/// Cells of an interval storage grid (break count minus one).
std::ptrdiff_t interval_cells(const std::vector<double>& knots, int order) {
    return static_cast<std::ptrdiff_t>(knots.size()) - 2 * order + 1;
}

} // namespace

MultiscaleDecomposition decompose(const Spline& f, const WaveletParams& params,
                                  BoundaryMode mode, int max_levels) {
    if (mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic transforms have separate entry points");
    if (f.order != params.order)
        throw GridMismatch("spline order does not match the transform order");
    if (max_levels < 0) throw IndexOutOfRange("level count cannot be negative");

    MultiscaleDecomposition out;
    out.params = params;
    out.mode = mode;

    // grid chain, finest first
    std::vector<std::vector<double>> chain{f.knots.values()};
    if (mode == BoundaryMode::WholeLine) {
        require_strictly_increasing(f.knots.values(), "knots");
    } else {
        const auto mu = static_cast<std::size_t>(params.order);
        if (f.knots.size() < 2 * mu)
            throw GridTooSmall("interval grid shorter than twice the order");
        std::vector<double> breaks(f.knots.values().begin() + (mu - 1),
                                   f.knots.values().end() - (mu - 1));
        require_strictly_increasing(breaks, "breaks");
    }
    const std::ptrdiff_t min_cells =
        std::max<std::ptrdiff_t>(1, params.dual_order - params.order + 3);
    for (int l = 0; l < max_levels; ++l) {
        std::vector<double> next = dyadic_coarsen_knots(chain.back(), mode, params.order);
        if (next.size() == chain.back().size()) break;
        if (mode == BoundaryMode::Interval && interval_cells(next, params.order) < min_cells)
            break;
        chain.push_back(std::move(next));
    }

    // Whole-line grids get one phantom margin shared by every level, so
    // each coarse grid stays a sub-multiset of its fine grid and every
    // wavelet window is interior.
    const int pad_lo = params.ell1() - 1, pad_hi = params.ell2() - 1;
    CoeffMatrix current = f.coeffs;
    if (mode == BoundaryMode::WholeLine) {
        const std::vector<double> ext0 = phantom_extension(chain.front(), pad_lo, pad_hi);
        for (auto& g : chain) {
            std::vector<double> e(ext0.begin(), ext0.begin() + pad_lo);
            e.insert(e.end(), g.begin(), g.end());
            e.insert(e.end(), ext0.end() - pad_hi, ext0.end());
            g = std::move(e);
        }
        CoeffMatrix embedded(current.rows() + static_cast<std::size_t>(pad_lo + pad_hi),
                             current.cols(), 0.0);
        for (std::size_t r = 0; r < current.rows(); ++r)
            embedded.assign_row(r + static_cast<std::size_t>(pad_lo), current, r);
        current = std::move(embedded);
    }

    std::vector<DecompositionLevel> levels;
    for (std::size_t l = 0; l + 1 < chain.size(); ++l) {
        LevelGrids grids = build_level(params, mode, KnotSequence(chain[l + 1]),
                                       KnotSequence(chain[l]));
        auto [coarse, details] = decompose_step(grids, current);
        current = std::move(coarse);
        levels.push_back(DecompositionLevel{std::move(grids), std::move(details)});
    }
    std::reverse(levels.begin(), levels.end());
    out.levels = std::move(levels);
    out.base_knots = KnotSequence(chain.back());
    out.base_coeffs = std::move(current);
    return out;
}

Spline reconstruct(const MultiscaleDecomposition& decomp) {
    const int m = decomp.params.order;
    CoeffMatrix current = decomp.base_coeffs;
    const KnotSequence* grid = &decomp.base_knots;
    for (const auto& level : decomp.levels) {
        if (level.grids.coarse.values() != grid->values())
            throw GridMismatch("level chain is not contiguous");
        current = reconstruct_step(level.grids, current, level.details);
        grid = &level.grids.fine;
    }
    if (decomp.mode == BoundaryMode::WholeLine) {
        // phantom rows come off by count; roundoff keeps them from being
        // exactly zero
        const int pad_lo = decomp.params.ell1() - 1, pad_hi = decomp.params.ell2() - 1;
        const auto& ext = grid->values();
        std::vector<double> user(ext.begin() + pad_lo, ext.end() - pad_hi);
        CoeffMatrix trimmed(current.rows() - static_cast<std::size_t>(pad_lo + pad_hi),
                            current.cols(), 0.0);
        for (std::size_t r = 0; r < trimmed.rows(); ++r)
            trimmed.assign_row(r, current, r + static_cast<std::size_t>(pad_lo));
        return Spline{m, KnotSequence(std::move(user)), std::move(trimmed)};
    }
    return Spline{m, *grid, std::move(current)};
}

} // namespace splinewave
