#include "splinewave/bspline.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>

#include "splinewave/errors.hpp"
#include "splinewave/opcount.hpp"
#include "kernels.hpp"

namespace splinewave {

namespace {

/// Row accessor with compact-support semantics: out-of-range rows are the
/// zero function's coefficients.
const double* row_or_null(const CoeffMatrix& c, std::ptrdiff_t r) {
    if (r < 0 || r >= static_cast<std::ptrdiff_t>(c.rows())) return nullptr;
    return c.row(static_cast<std::size_t>(r)).data();
}

std::ptrdiff_t factorial(int n) {
    std::ptrdiff_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Largest index j with knots[j] <= t, or -1 when t precedes every knot.
std::ptrdiff_t anchor_index(const KnotSequence& knots, double t) {
    const auto& v = knots.values();
    auto it = std::upper_bound(v.begin(), v.end(), t);
    return static_cast<std::ptrdiff_t>(it - v.begin()) - 1;
}

} // namespace

Spline make_spline(int order, std::vector<double> knots, CoeffMatrix coeffs) {
    if (order < 1) throw OrderUnderflow("spline order must be at least 1");
    KnotSequence ks(std::move(knots));
    validate_knots(ks, order);
    const std::size_t nb = ks.num_basis(order);
    if (coeffs.rows() != nb)
        throw GridMismatch("coefficient rows (" + std::to_string(coeffs.rows()) +
                           ") do not match basis count (" + std::to_string(nb) + ")");
    return Spline{order, std::move(ks), std::move(coeffs)};
}

std::vector<double> eval_spline(const Spline& s, double t) {
    const int m = s.order;
    const std::size_t nch = s.channels();
    const std::size_t cell = s.knots.find_interval(t);
    KnotView view(s.knots, KnotView::Mode::Extend);
    std::vector<double> out(nch, 0.0), work(static_cast<std::size_t>(m) * nch);
    detail::deboor_rows(
        m, static_cast<std::ptrdiff_t>(cell), t, [&](std::ptrdiff_t j) { return view(j); },
        [&](std::ptrdiff_t r) { return row_or_null(s.coeffs, r); }, nch, out.data(), work.data());
    return out;
}

std::pair<std::ptrdiff_t, std::vector<double>> basis_values(const KnotSequence& knots,
                                                            int order, double t) {
    const int m = order;
    const auto cell = static_cast<std::ptrdiff_t>(knots.find_interval(t));
    KnotView view(knots, KnotView::Mode::Extend);
    // Bottom-up triangle: vals[r] holds N_{k+1, cell-k+r}(t) after level k.
    // Every divisor is the knot span of a function nonzero on the (nonempty)
    // cell, hence positive.
    std::vector<double> vals(static_cast<std::size_t>(m), 0.0);
    vals[0] = 1.0;
    std::vector<double> left(static_cast<std::size_t>(m)), right(static_cast<std::size_t>(m));
    for (int k = 1; k < m; ++k) {
        left[static_cast<std::size_t>(k)] = t - view(cell + 1 - k);
        right[static_cast<std::size_t>(k)] = view(cell + k) - t;
        double saved = 0.0;
        for (int r = 0; r < k; ++r) {
            const double den = right[static_cast<std::size_t>(r + 1)] +
                               left[static_cast<std::size_t>(k - r)];
            const double temp = vals[static_cast<std::size_t>(r)] / den;
            vals[static_cast<std::size_t>(r)] =
                saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(k - r)] * temp;
        }
        vals[static_cast<std::size_t>(k)] = saved;
    }
    opcount::add(static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m));
    return {cell - m + 1, std::move(vals)};
}

Spline differentiate(const Spline& s) {
    const int m = s.order;
    if (m <= 1) throw OrderUnderflow("cannot differentiate a spline of order 1");
    const std::size_t nch = s.channels();
    const auto nb = static_cast<std::ptrdiff_t>(s.num_basis());
    CoeffMatrix d(s.num_basis() + 1, nch, 0.0);
    for (std::ptrdiff_t k = 0; k <= nb; ++k) {
        const double span = s.knots[static_cast<std::size_t>(k + m - 1)] -
                            s.knots[static_cast<std::size_t>(k)];
        if (span <= 0.0) continue; // full-multiplicity boundary: no polynomial jump
        const double f = (m - 1) / span;
        const double* ck = row_or_null(s.coeffs, k);
        const double* ckm1 = row_or_null(s.coeffs, k - 1);
        for (std::size_t c = 0; c < nch; ++c)
            d(static_cast<std::size_t>(k), c) =
                f * ((ck ? ck[c] : 0.0) - (ckm1 ? ckm1[c] : 0.0));
    }
    opcount::add(3 * (static_cast<std::uint64_t>(nb) + 1) * nch);
    return Spline{m - 1, s.knots, std::move(d)};
}

CoeffMatrix truncated_power_coeffs(const Spline& s) {
    Spline b = s;
    while (b.order > 1) b = differentiate(b);
    const std::size_t K = s.knots.size();
    const std::size_t nch = s.channels();
    const double inv_fact = 1.0 / static_cast<double>(factorial(s.order - 1));
    CoeffMatrix a(K, nch, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const double* bk = row_or_null(b.coeffs, static_cast<std::ptrdiff_t>(k));
        const double* bkm1 = row_or_null(b.coeffs, static_cast<std::ptrdiff_t>(k) - 1);
        for (std::size_t c = 0; c < nch; ++c)
            a(k, c) = ((bk ? bk[c] : 0.0) - (bkm1 ? bkm1[c] : 0.0)) * inv_fact;
    }
    return a;
}

Spline oslo_refine(const Spline& s, const KnotSequence& fine) {
    const int m = s.order;
    validate_knots(fine, m);
    if (!is_refinement(s.knots, fine))
        throw NotARefinement("target knots do not contain the source knots");
    const std::size_t nch = s.channels();
    const std::size_t nb_fine = fine.num_basis(m);
    CoeffMatrix out(nb_fine, nch, 0.0);
    KnotView tau(s.knots, KnotView::Mode::Extend);
    KnotView fv(fine, KnotView::Mode::Extend);
    const double closed_min = s.knots.front();
    std::vector<double> work(static_cast<std::size_t>(m) * nch);
    for (std::size_t i = 0; i < nb_fine; ++i) {
        const std::ptrdiff_t mu = anchor_index(s.knots, fine[i]);
        detail::oslo_coefficient(
            m, mu, static_cast<std::ptrdiff_t>(i), [&](std::ptrdiff_t j) { return tau(j); },
            [&](std::ptrdiff_t j) { return fv(j); },
            [&](std::ptrdiff_t r) { return row_or_null(s.coeffs, r); }, nch, closed_min,
            out.row(i).data(), work.data());
    }
    return Spline{m, fine, std::move(out)};
}

Spline boehm_insert(const Spline& s, double t) {
    const int m = s.order;
    if (!(t > s.knots.front() && t < s.knots.back()))
        throw KnotOutOfRange("insertion site must lie strictly inside the knot range");
    const auto& old_v = s.knots.values();
    const auto r = static_cast<std::ptrdiff_t>(
        std::upper_bound(old_v.begin(), old_v.end(), t) - old_v.begin());
    std::vector<double> new_v(old_v);
    new_v.insert(new_v.begin() + r, t);
    KnotSequence new_ks((std::move(new_v)));
    validate_knots(new_ks, m); // interior multiplicity may overflow
    const std::size_t nch = s.channels();
    const std::size_t nb_new = s.num_basis() + 1;
    CoeffMatrix q(nb_new, nch, 0.0);
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nb_new); ++i) {
        if (i <= r - m) {
            q.assign_row(static_cast<std::size_t>(i), s.coeffs, static_cast<std::size_t>(i));
        } else if (i >= r) {
            q.assign_row(static_cast<std::size_t>(i), s.coeffs, static_cast<std::size_t>(i - 1));
        } else {
            // Affected band: the blossom argument mixes the two neighbours
            // with weights splitting the span (t_i, t_{i+m-1}) at t.
            const double lo = old_v[static_cast<std::size_t>(i)];
            const double hi = old_v[static_cast<std::size_t>(i + m - 1)];
            const double den = hi - lo;
            const double* pi = row_or_null(s.coeffs, i);
            const double* pim1 = row_or_null(s.coeffs, i - 1);
            if (den <= 0.0) continue;
            const double wl = (t - lo) / den, wr = (hi - t) / den;
            for (std::size_t c = 0; c < nch; ++c)
                q(static_cast<std::size_t>(i), c) =
                    wl * (pi ? pi[c] : 0.0) + wr * (pim1 ? pim1[c] : 0.0);
            opcount::add(4 * nch);
        }
    }
    return Spline{m, std::move(new_ks), std::move(q)};
}

namespace {

enum class SweepDir { Backward, Forward };

Spline remove_knot_impl(const Spline& s, std::size_t knot_index, SweepDir dir) {
    const int m = s.order;
    const std::size_t K = s.knots.size();
    if (knot_index < 1 || knot_index + 1 >= K)
        throw IndexOutOfRange("only interior knots can be removed");
    if (s.num_basis() < 1) throw GridMismatch("no coefficients to remove from");
    const auto r = static_cast<std::ptrdiff_t>(knot_index);
    const std::size_t nch = s.channels();
    const std::size_t nb_new = s.num_basis() - 1;

    std::vector<double> new_v(s.knots.values());
    new_v.erase(new_v.begin() + r);

    CoeffMatrix p(nb_new, nch, 0.0);
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nb_new); ++i) {
        if (i <= r - m)
            p.assign_row(static_cast<std::size_t>(i), s.coeffs, static_cast<std::size_t>(i));
        else if (i >= r - 1)
            p.assign_row(static_cast<std::size_t>(i), s.coeffs, static_cast<std::size_t>(i + 1));
    }

    KnotView theta(s.knots, KnotView::Mode::Extend);
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, r - m + 1);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(r - 2, static_cast<std::ptrdiff_t>(nb_new) - 1);
    for (std::size_t c = 0; c < nch; ++c) {
        auto theta_at = [&](std::ptrdiff_t j) { return theta(j); };
        auto q_at = [&](std::ptrdiff_t j) -> double {
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(s.coeffs.rows())) return 0.0;
            return s.coeffs(static_cast<std::size_t>(j), c);
        };
        auto p_get = [&](std::ptrdiff_t j) -> double {
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(nb_new)) return 0.0;
            return p(static_cast<std::size_t>(j), c);
        };
        auto p_set = [&](std::ptrdiff_t j, double v) {
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(nb_new))
                p(static_cast<std::size_t>(j), c) = v;
        };
        if (dir == SweepDir::Backward)
            detail::removal_backward_sweep<double>(m, r, theta_at, q_at, p_get, p_set, lo, hi);
        else
            detail::removal_forward_sweep<double>(m, r, theta_at, q_at, p_get, p_set, lo, hi);
    }
    return Spline{m, KnotSequence(std::move(new_v)), std::move(p)};
}

} // namespace

Spline remove_knot_backward(const Spline& s, std::size_t knot_index) {
    return remove_knot_impl(s, knot_index, SweepDir::Backward);
}

Spline remove_knot_forward(const Spline& s, std::size_t knot_index) {
    return remove_knot_impl(s, knot_index, SweepDir::Forward);
}

} // namespace splinewave
