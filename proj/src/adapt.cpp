#include "splinewave/adapt.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "splinewave/errors.hpp"
#include "splinewave/interval.hpp"
#include "splinewave/opcount.hpp"

namespace splinewave {

namespace {

struct PassOutcome {
    CoeffMatrix coeffs;
    std::vector<double> kept_grid;
    std::vector<double> removed;
    std::vector<KeptDetail> kept;
};

/// One thresholding pass: subtract every wavelet whose detail magnitude is
/// strictly below epsilon and remove its knot.  Wavelets whose fine windows
/// reach into the first pin_lo or last pin_hi coefficient rows are exempt;
/// subtracting them would put mass on those rows.
PassOutcome threshold_pass(const CoeffMatrix& coeffs, const LevelGrids& level, double epsilon,
                           std::size_t pin_lo, std::size_t pin_hi) {
    const CoeffMatrix details = detail_coefficients(level, coeffs);
    const std::size_t nch = coeffs.cols();
    const auto nb = static_cast<std::ptrdiff_t>(coeffs.rows());

    PassOutcome out;
    std::vector<char> drop(level.num_wavelets(), 0);
    std::vector<std::size_t> removed_pos;
    for (std::size_t k = 0; k < level.num_wavelets(); ++k) {
        const WaveletSlot& slot = level.slots[k];
        const double mag = details.max_abs_row(k);
        const bool pinned =
            slot.b_offset < static_cast<std::ptrdiff_t>(pin_lo) ||
            slot.b_offset + static_cast<std::ptrdiff_t>(slot.b.size()) >
                nb - static_cast<std::ptrdiff_t>(pin_hi);
        if (!pinned && mag < epsilon) {
            drop[k] = 1;
            removed_pos.push_back(level.new_indices[k]);
            out.removed.push_back(slot.new_value);
        } else {
            KeptDetail kd;
            kd.wavelet = k;
            kd.knot = slot.new_value;
            kd.values.assign(details.row(k).begin(), details.row(k).end());
            kd.magnitude = mag;
            out.kept.push_back(std::move(kd));
        }
    }

    if (removed_pos.empty()) {
        out.coeffs = coeffs;
        out.kept_grid = level.fine.values();
        return out;
    }

    // Subtract the discarded wavelets.  The remainder has no derivative
    // jumps at their knots anymore, so it lives exactly on the kept grid.
    CoeffMatrix work = coeffs;
    for (std::size_t k = 0; k < level.num_wavelets(); ++k) {
        if (!drop[k]) continue;
        const WaveletSlot& slot = level.slots[k];
        for (std::size_t i = 0; i < slot.b.size(); ++i) {
            const auto row = static_cast<std::size_t>(slot.b_offset) + i;
            for (std::size_t c = 0; c < nch; ++c) work(row, c) -= details(k, c) * slot.b[i];
        }
        opcount::add(2 * slot.b.size() * nch);
    }

    const std::vector<double>& fv = level.fine.values();
    out.kept_grid.reserve(fv.size() - removed_pos.size());
    std::size_t next = 0;
    for (std::size_t j = 0; j < fv.size(); ++j) {
        if (next < removed_pos.size() && j == removed_pos[next]) {
            ++next;
            continue;
        }
        out.kept_grid.push_back(fv[j]);
    }

    // Removing the knots is now an exact re-representation.  A plain
    // decomposition step against the kept grid performs it with the
    // streaming sweep; its detail output is roundoff noise by construction
    // and is discarded.
    LevelGrids sub =
        build_level(level.params, level.mode, KnotSequence(out.kept_grid), level.fine);
    auto [res, noise] = decompose_step(sub, work);
    (void)noise;
    out.coeffs = std::move(res);
    return out;
}

void require_strictly_increasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1])
            throw GridMismatch(std::string("coarsening needs strictly increasing ") + what);
}

double sup_diff_fn(const Spline& a, const ScalarFunction& f, int n) {
    const double lo = a.knots.values().front();
    const double hi = a.knots.values().back();
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        m = std::max(m, std::abs(eval_spline(a, t)[0] - f(t)));
    }
    return m;
}

double sup_diff(const Spline& a, const Spline& b, int n) {
    const double lo = a.knots.values().front();
    const double hi = a.knots.values().back();
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        m = std::max(m, std::abs(eval_spline(a, t)[0] - eval_spline(b, t)[0]));
    }
    return m;
}

} // namespace

CoarsenReport coarsen(const Spline& s, const LevelGrids& level, double epsilon) {
    if (level.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic thresholding is not supported");
    if (s.order != level.params.order)
        throw GridMismatch("spline order does not match the level transition");
    if (s.knots.values() != level.fine.values())
        throw GridMismatch("spline does not live on the level's fine grid");
    if (epsilon < 0.0) throw InvalidConfig("threshold cannot be negative");

    PassOutcome pass = threshold_pass(s.coeffs, level, epsilon, 0, 0);
    CoarsenReport rep;
    rep.passes = pass.removed.empty() ? 0 : 1;
    rep.threshold = epsilon;
    rep.error_bound = (level.params.order + level.params.dual_order - 1) * rep.passes * epsilon;
    rep.removed_knots = std::move(pass.removed);
    rep.kept_details = std::move(pass.kept);
    rep.result = make_spline(s.order, std::move(pass.kept_grid), std::move(pass.coeffs));
    return rep;
}

CoarsenReport coarsen_repeated(const Spline& s, const WaveletParams& params, BoundaryMode mode,
                               double epsilon, int passes) {
    if (mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic transforms have separate entry points");
    if (s.order != params.order)
        throw GridMismatch("spline order does not match the transform order");
    if (passes < 0) throw IndexOutOfRange("pass count cannot be negative");
    if (epsilon < 0.0) throw InvalidConfig("threshold cannot be negative");

    if (mode == BoundaryMode::WholeLine) {
        require_strictly_increasing(s.knots.values(), "knots");
    } else {
        const auto mu = static_cast<std::size_t>(params.order);
        if (s.knots.size() < 2 * mu)
            throw GridTooSmall("interval grid shorter than twice the order");
        std::vector<double> breaks(s.knots.values().begin() + (mu - 1),
                                   s.knots.values().end() - (mu - 1));
        require_strictly_increasing(breaks, "breaks");
    }

    const int pad_lo = mode == BoundaryMode::WholeLine ? params.ell1() - 1 : 0;
    const int pad_hi = mode == BoundaryMode::WholeLine ? params.ell2() - 1 : 0;
    const auto plo = static_cast<std::size_t>(pad_lo);
    const auto phi = static_cast<std::size_t>(pad_hi);

    std::vector<double> grid = s.knots.values();
    CoeffMatrix coeffs = s.coeffs;
    if (mode == BoundaryMode::WholeLine) {
        grid = phantom_extension(grid, pad_lo, pad_hi);
        CoeffMatrix embedded(coeffs.rows() + plo + phi, coeffs.cols(), 0.0);
        for (std::size_t r = 0; r < coeffs.rows(); ++r) embedded.assign_row(r + plo, coeffs, r);
        coeffs = std::move(embedded);
    }

    const std::ptrdiff_t min_cells =
        std::max<std::ptrdiff_t>(1, params.dual_order - params.order + 3);

    int done = 0;
    std::vector<double> removed_all;
    std::vector<KeptDetail> last_kept;
    for (int p = 0; p < passes; ++p) {
        const std::vector<double> core(grid.begin() + static_cast<std::ptrdiff_t>(plo),
                                       grid.end() - static_cast<std::ptrdiff_t>(phi));
        std::vector<double> coarse_core = dyadic_coarsen_knots(core, mode, params.order);
        if (coarse_core.size() == core.size()) break;
        if (mode == BoundaryMode::Interval &&
            static_cast<std::ptrdiff_t>(coarse_core.size()) - 2 * params.order + 1 < min_cells)
            break;
        std::vector<double> coarse;
        if (mode == BoundaryMode::WholeLine) {
            coarse.assign(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(plo));
            coarse.insert(coarse.end(), coarse_core.begin(), coarse_core.end());
            coarse.insert(coarse.end(), grid.end() - static_cast<std::ptrdiff_t>(phi),
                          grid.end());
        } else {
            coarse = std::move(coarse_core);
        }
        LevelGrids level =
            build_level(params, mode, KnotSequence(std::move(coarse)), KnotSequence(grid));
        PassOutcome pass = threshold_pass(coeffs, level, epsilon, plo, phi);
        last_kept = std::move(pass.kept);
        if (pass.removed.empty()) break;
        removed_all.insert(removed_all.end(), pass.removed.begin(), pass.removed.end());
        grid = std::move(pass.kept_grid);
        coeffs = std::move(pass.coeffs);
        ++done;
    }

    if (mode == BoundaryMode::WholeLine) {
        // The scaffolding comes off by count.  Rows under it are zero up to
        // roundoff because no subtracted window reached them.
        grid.erase(grid.end() - static_cast<std::ptrdiff_t>(phi), grid.end());
        grid.erase(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(plo));
        CoeffMatrix trimmed(coeffs.rows() - plo - phi, coeffs.cols(), 0.0);
        for (std::size_t r = 0; r < trimmed.rows(); ++r) trimmed.assign_row(r, coeffs, r + plo);
        coeffs = std::move(trimmed);
    }

    std::sort(removed_all.begin(), removed_all.end());
    CoarsenReport rep;
    rep.passes = done;
    rep.threshold = epsilon;
    rep.error_bound = (params.order + params.dual_order - 1) * done * epsilon;
    rep.removed_knots = std::move(removed_all);
    rep.kept_details = std::move(last_kept);
    rep.result = make_spline(params.order, std::move(grid), std::move(coeffs));
    return rep;
}

std::vector<double> refine_grid(const std::vector<double>& knots,
                                const std::vector<DetailMark>& details, double alpha) {
    double top = 0.0;
    for (const DetailMark& d : details) top = std::max(top, std::abs(d.magnitude));
    if (top <= 0.0) return knots;

    std::vector<double> inserted;
    for (const DetailMark& d : details) {
        if (d.knot_index == 0 || d.knot_index + 1 >= knots.size())
            throw IndexOutOfRange("detail mark must sit on an interior knot");
        const auto n = static_cast<std::size_t>(std::floor(std::abs(d.magnitude) * alpha / top));
        if (n == 0) continue;
        for (std::size_t side = 0; side < 2; ++side) {
            const double lo = knots[d.knot_index - 1 + side];
            const double hi = knots[d.knot_index + side];
            if (!(hi > lo)) continue; // zero-length flank at a multiple knot
            for (std::size_t i = 1; i <= n; ++i)
                inserted.push_back(lo + (hi - lo) * (static_cast<double>(i) /
                                                     static_cast<double>(n + 1)));
        }
    }
    if (inserted.empty()) return knots;
    // dedupe only the insertions: they never coincide with existing knots,
    // and existing multiplicities (interval boundaries) must survive
    std::sort(inserted.begin(), inserted.end());
    inserted.erase(std::unique(inserted.begin(), inserted.end()), inserted.end());
    std::vector<double> out;
    out.reserve(knots.size() + inserted.size());
    std::merge(knots.begin(), knots.end(), inserted.begin(), inserted.end(),
               std::back_inserter(out));
    return out;
}

Spline interpolate(const ScalarFunction& f, const KnotSequence& grid, int order) {
    if (order < 2) throw OrderUnderflow("knot-average sites need order at least 2");
    if (grid.size() <= static_cast<std::size_t>(order))
        throw GridTooSmall("grid carries no basis functions");
    const std::size_t nb = grid.size() - static_cast<std::size_t>(order);

    std::vector<double> sites(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        double acc = 0.0;
        for (int j = 1; j < order; ++j) acc += grid[k + static_cast<std::size_t>(j)];
        sites[k] = acc / (order - 1);
    }

    // Collocation entry (i, j) can be nonzero only for |i - j| <= order - 2:
    // site i lies inside [t_{i+1}, t_{i+order-1}], which basis j misses
    // whenever j is further away.  Partial pivoting fills one extra band of
    // superdiagonals, hence the 3 kb + 1 stride.
    const std::size_t kb = static_cast<std::size_t>(order - 1);
    const std::size_t stride = 3 * kb + 1;
    std::vector<double> ab(stride * nb, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return ab[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(2 * kb) +
                                           static_cast<std::ptrdiff_t>(i) -
                                           static_cast<std::ptrdiff_t>(j)) +
                  j * stride];
    };

    double amax = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        auto [first, vals] = basis_values(grid, order, sites[i]);
        for (std::size_t l = 0; l < vals.size(); ++l) {
            const std::ptrdiff_t j = first + static_cast<std::ptrdiff_t>(l);
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(nb)) continue;
            const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i) - j;
            // out-of-band values are exact zeros (support endpoints)
            if (d > static_cast<std::ptrdiff_t>(kb) || d < -static_cast<std::ptrdiff_t>(kb))
                continue;
            at(i, static_cast<std::size_t>(j)) = vals[l];
            amax = std::max(amax, std::abs(vals[l]));
        }
    }
    if (amax <= 0.0) throw SingularSystem("collocation matrix is zero");

    std::vector<double> rhs(nb);
    for (std::size_t i = 0; i < nb; ++i) rhs[i] = f(sites[i]);

    // banded LU with partial pivoting, right-hand side folded in
    const double tiny = 1e-14 * amax;
    for (std::size_t col = 0; col < nb; ++col) {
        std::size_t prow = col;
        double pval = std::abs(at(col, col));
        const std::size_t ilast = std::min(nb - 1, col + kb);
        for (std::size_t i = col + 1; i <= ilast; ++i)
            if (std::abs(at(i, col)) > pval) {
                pval = std::abs(at(i, col));
                prow = i;
            }
        if (pval <= tiny)
            throw SingularSystem("collocation sites do not determine the interpolant");
        const std::size_t jlast = std::min(nb - 1, col + 2 * kb);
        if (prow != col) {
            for (std::size_t j = col; j <= jlast; ++j) std::swap(at(col, j), at(prow, j));
            std::swap(rhs[col], rhs[prow]);
        }
        for (std::size_t i = col + 1; i <= ilast; ++i) {
            const double mult = at(i, col) / at(col, col);
            if (mult == 0.0) continue;
            for (std::size_t j = col + 1; j <= jlast; ++j) at(i, j) -= mult * at(col, j);
            rhs[i] -= mult * rhs[col];
        }
        opcount::add(2 * (ilast - col) * (jlast - col + 1));
    }

    std::vector<double> x(nb);
    for (std::size_t ii = nb; ii-- > 0;) {
        double acc = rhs[ii];
        const std::size_t jlast = std::min(nb - 1, ii + 2 * kb);
        for (std::size_t j = ii + 1; j <= jlast; ++j) acc -= at(ii, j) * x[j];
        x[ii] = acc / at(ii, ii);
    }
    return make_spline(order, grid.values(), CoeffMatrix::from_column(x));
}

ApproximationMethod interpolation_method(int order) {
    return [order](const ScalarFunction& f, const KnotSequence& grid, const Spline*, double) {
        return interpolate(f, grid, order);
    };
}

RefineResult refine_loop(const ScalarFunction& f, const ApproximationMethod& method,
                         const KnotSequence& initial_grid, const WaveletParams& params,
                         const RefineConfig& config) {
    if (!(config.alpha > 1.0)) throw InvalidConfig("refinement rate must exceed one");
    if (!(config.epsilon > 0.0)) throw InvalidConfig("stopping tolerance must be positive");
    if (config.max_iters < 1) throw InvalidConfig("iteration budget must be positive");
    if (config.sample_points < 2) throw InvalidConfig("sup norm needs at least two samples");
    if (!f) throw InvalidConfig("target function is empty");
    if (!method) throw InvalidConfig("approximation method is empty");
    if (!is_interval_grid(params.order, initial_grid))
        throw GridMismatch("refinement needs boundary knots of multiplicity order");

    const std::ptrdiff_t min_cells =
        std::max<std::ptrdiff_t>(1, params.dual_order - params.order + 3);

    auto approximate = [&](const KnotSequence& grid, const Spline* warm) {
        Spline g = method(f, grid, warm, config.epsilon);
        if (g.order != params.order || g.knots.values() != grid.values())
            throw GridMismatch("approximation method must return a spline on the requested grid");
        if (g.channels() != 1) throw GridMismatch("refinement targets are single channel");
        return g;
    };

    RefineResult res;
    std::vector<double> grid = initial_grid.values();
    Spline cur = approximate(initial_grid, nullptr);
    res.history.push_back(
        {grid.size(), std::numeric_limits<double>::infinity(),
         sup_diff_fn(cur, f, config.sample_points)});

    for (int it = 1; it <= config.max_iters; ++it) {
        // one level of detail coefficients of the current iterate
        std::vector<double> coarse =
            dyadic_coarsen_knots(grid, BoundaryMode::Interval, params.order);
        std::vector<DetailMark> marks;
        if (coarse.size() != grid.size() &&
            static_cast<std::ptrdiff_t>(coarse.size()) - 2 * params.order + 1 >= min_cells) {
            LevelGrids level = build_level(params, BoundaryMode::Interval,
                                           KnotSequence(std::move(coarse)), KnotSequence(grid));
            const CoeffMatrix details = detail_coefficients(level, cur.coeffs);
            marks.reserve(level.num_wavelets());
            for (std::size_t k = 0; k < level.num_wavelets(); ++k)
                marks.push_back({level.new_indices[k], details.max_abs_row(k)});
        }
        std::vector<double> next = refine_grid(grid, marks, config.alpha);

        const KnotSequence ng(next);
        const Spline warm = next == grid ? cur : oslo_refine(cur, ng);
        Spline g = approximate(ng, &warm);
        const double change = sup_diff(g, cur, config.sample_points);
        res.history.push_back({next.size(), change, sup_diff_fn(g, f, config.sample_points)});
        grid = std::move(next);
        cur = std::move(g);
        res.iterations = it;
        if (change < config.epsilon) {
            res.converged = true;
            break;
        }
    }

    if (config.final_coarsen) {
        const double eps_c =
            config.coarsen_epsilon > 0.0 ? config.coarsen_epsilon : config.epsilon / 10.0;
        CoarsenReport rep = coarsen_repeated(cur, params, BoundaryMode::Interval, eps_c, 1);
        const double change = sup_diff(rep.result, cur, config.sample_points);
        cur = std::move(rep.result);
        res.history.push_back(
            {cur.knots.size(), change, sup_diff_fn(cur, f, config.sample_points)});
    }
    res.approximation = std::move(cur);
    return res;
}

} // namespace splinewave
