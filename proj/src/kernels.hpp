#pragma once

// Internal recursion kernels shared by the plain and periodic code paths.
// Knot access goes through signed-index callables so the same arithmetic
// serves stored arrays, virtual uniform extensions, and periodic wrapping.
// Coefficient rows come back as const double* with nullptr meaning an
// all-zero row (a basis function beyond the stored range of a compactly
// supported spline).

#include <cstddef>
#include <optional>

#include "splinewave/opcount.hpp"

namespace splinewave::detail {

/// Membership of x in the half-open cell (lo, hi], with the closed-minimum
/// amendment: when x equals the global minimum, the nonempty cell starting
/// exactly there counts as containing x.  Without the amendment every cell
/// test at the left end of a closed interval fails and boundary
/// coefficients come out zero.
inline bool cell_contains(double lo, double hi, double x,
                          const std::optional<double>& closed_min) {
    if (lo < x && x <= hi) return true;
    return closed_min.has_value() && x == *closed_min && lo == x && x < hi;
}

/// de Boor triangle on coefficient rows.
///
/// Evaluates sum_k c_k N_{m,k}(t) for t in the nonempty cell
/// (knot(cell), knot(cell+1)] (or at its left endpoint under the
/// closed-minimum convention).  Only rows cell-m+1 .. cell contribute.  At
/// triangle level l the combination for row j divides by
/// knot(j+m-l) - knot(j), which is at least the cell width, so no guard is
/// needed.
///
/// work must hold m*nch doubles; out must hold nch.
template <class KnotF, class RowF>
inline void deboor_rows(int m, std::ptrdiff_t cell, double t, KnotF&& knot,
                        RowF&& row, std::size_t nch, double* out, double* work) {
    const std::ptrdiff_t base = cell - m + 1;
    for (std::ptrdiff_t j = base; j <= cell; ++j) {
        const double* src = row(j);
        double* dst = work + (j - base) * nch;
        for (std::size_t c = 0; c < nch; ++c) dst[c] = src ? src[c] : 0.0;
    }
    for (int l = 1; l < m; ++l) {
        for (std::ptrdiff_t j = cell; j >= base + l; --j) {
            const double lo = knot(j);
            const double hi = knot(j + m - l);
            const double w = (t - lo) / (hi - lo);
            double* dj = work + (j - base) * nch;
            const double* djm1 = work + (j - 1 - base) * nch;
            for (std::size_t c = 0; c < nch; ++c)
                dj[c] = w * dj[c] + (1.0 - w) * djm1[c];
        }
    }
    opcount::add(static_cast<std::uint64_t>(m) * m * nch);
    const double* top = work + (cell - base) * nch;
    for (std::size_t c = 0; c < nch; ++c) out[c] = top[c];
}

/// One coefficient of a spline re-expressed on a refinement.
///
/// Coefficient i of the fine expansion is the triangle value
/// d^{(m-1)}_{mu}, where mu anchors the coarse cell with
/// tau(mu) <= fine_knot(i) < tau(mu+1) (largest such index) and the
/// recursion consumes the fine knots x_k = fine_knot(i+m-k), k = 1..m-1:
///
///   d^{(k)}_j = [(x_k - tau_j) d^{(k-1)}_j + (tau_{j+m-k} - x_k) d^{(k-1)}_{j-1}]
///               / (tau_{j+m-k} - tau_j)      if x_k lies in (tau_j, tau_{j+m-k}]
///             = 0                             otherwise.
///
/// The membership test uses the closed-minimum amendment so boundary knots
/// of multiplicity m work.  When the test passes the divisor is positive.
///
/// work must hold m*nch doubles; out must hold nch.
template <class TauF, class FineKnotF, class RowF>
inline void oslo_coefficient(int m, std::ptrdiff_t mu, std::ptrdiff_t i,
                             TauF&& tau, FineKnotF&& fine_knot, RowF&& coarse_row,
                             std::size_t nch, const std::optional<double>& closed_min,
                             double* out, double* work) {
    const std::ptrdiff_t base = mu - m + 1;
    for (std::ptrdiff_t j = base; j <= mu; ++j) {
        const double* src = coarse_row(j);
        double* dst = work + (j - base) * nch;
        for (std::size_t c = 0; c < nch; ++c) dst[c] = src ? src[c] : 0.0;
    }
    for (int k = 1; k < m; ++k) {
        const double x = fine_knot(i + m - k);
        for (std::ptrdiff_t j = mu; j >= base + k; --j) {
            const double lo = tau(j);
            const double hi = tau(j + m - k);
            double* dj = work + (j - base) * nch;
            if (!cell_contains(lo, hi, x, closed_min)) {
                for (std::size_t c = 0; c < nch; ++c) dj[c] = 0.0;
                continue;
            }
            const double w = (x - lo) / (hi - lo);
            const double* djm1 = work + (j - 1 - base) * nch;
            for (std::size_t c = 0; c < nch; ++c)
                dj[c] = w * dj[c] + (1.0 - w) * djm1[c];
        }
    }
    opcount::add(static_cast<std::uint64_t>(m) * m * nch);
    const double* top = work + (mu - base) * nch;
    for (std::size_t c = 0; c < nch; ++c) out[c] = top[c];
}

/// Interior coefficients affected by removing one knot.
///
/// Removing the knot at position r from the sequence theta inverts a single
/// insertion.  With q the coefficients before and p after the removal,
///
///   p_i = q_i                for i <= r-m,
///   p_i = q_{i+1}            for i >= r-1,
///
/// and the band r-m+1 <= i <= r-2 satisfies, for r-m+1 <= i <= r-1,
///
///   q_i (theta_{i+m} - theta_i) = (theta_r - theta_i) p_i
///                               + (theta_{i+m} - theta_r) p_{i-1}.
///
/// That is m-1 equations for m-2 unknowns; the surplus equation is the
/// removability condition.  Solving right to left (seeded by
/// p_{r-1} = q_r) divides by theta_{i+1+m} - theta_r; solving left to
/// right (seeded by p_{r-m} = q_{r-m}) divides by theta_r - theta_i and
/// feeds each result into the next, which is the numerically fragile
/// direction.  Both are kept: the backward sweep is the production path,
/// the forward sweep exists to demonstrate the difference.
///
/// Scalar is a template parameter so a test can run both sweeps in exact
/// rational arithmetic on this very code.  q(i) reads pre-removal
/// coefficients, p_get/p_set access post-removal ones; all indices are in
/// pre/post coefficient numbering as above.  lo/hi clamp the band of
/// indices actually written (callers clamp to their stored ranges; the
/// dropped relations are exactly the redundant ones).
template <class Scalar, class KnotF, class QF, class PGetF, class PSetF>
inline void removal_backward_sweep(int m, std::ptrdiff_t r, KnotF&& theta, QF&& q,
                                   PGetF&& p_get, PSetF&& p_set,
                                   std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = hi; i >= lo; --i) {
        const Scalar den = theta(i + 1 + m) - theta(r);
        if (den == Scalar(0)) {
            p_set(i, Scalar(0));
            continue;
        }
        const Scalar num = (theta(i + 1 + m) - theta(i + 1)) * q(i + 1)
                         - (theta(r) - theta(i + 1)) * p_get(i + 1);
        p_set(i, num / den);
    }
    opcount::add(static_cast<std::uint64_t>(hi >= lo ? hi - lo + 1 : 0) * 5);
}

template <class Scalar, class KnotF, class QF, class PGetF, class PSetF>
inline void removal_forward_sweep(int m, std::ptrdiff_t r, KnotF&& theta, QF&& q,
                                  PGetF&& p_get, PSetF&& p_set,
                                  std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        const Scalar den = theta(r) - theta(i);
        if (den == Scalar(0)) {
            p_set(i, Scalar(0));
            continue;
        }
        const Scalar num = (theta(i + m) - theta(i)) * q(i)
                         - (theta(i + m) - theta(r)) * p_get(i - 1);
        p_set(i, num / den);
    }
    opcount::add(static_cast<std::uint64_t>(hi >= lo ? hi - lo + 1 : 0) * 5);
}

} // namespace splinewave::detail
