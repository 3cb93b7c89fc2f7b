#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "splinewave/coeff_matrix.hpp"
#include "splinewave/knots.hpp"

namespace splinewave {

/// Spline in B-spline form.
///
/// Coefficient row k multiplies the B-spline of the given order supported
/// on [knots[k], knots[k+order]], so there are knots.size() - order rows.
/// Functions with N channels share one knot sequence and carry N columns.
///
/// A spline whose first and last knots are simple is read as a compactly
/// supported function on the whole line: basis functions beyond the stored
/// coefficient range have coefficient zero.  Boundary knots of multiplicity
/// equal to the order give the usual closed-interval spline space instead.
struct Spline {
    int order = 0;
    KnotSequence knots;
    CoeffMatrix coeffs;

    std::size_t num_basis() const { return knots.num_basis(order); }
    std::size_t channels() const { return coeffs.cols(); }
};

/// Validates and assembles a spline.  Throws DecreasingKnots,
/// ExcessMultiplicity, or GridMismatch (coefficient rows vs. basis count).
Spline make_spline(int order, std::vector<double> knots, CoeffMatrix coeffs);

/// All channels of s at t.  Throws OutOfSupport outside [t_0, t_n]; the
/// value at an interior knot is the limit from the left, the value at t_0
/// the limit from the right.
std::vector<double> eval_spline(const Spline& s, double t);

/// Values of the order-m B-splines that are nonzero at t, as
/// (first_basis_index, values).  Indices may stick out of the stored
/// coefficient range near the ends; callers mask them.
std::pair<std::ptrdiff_t, std::vector<double>> basis_values(const KnotSequence& knots,
                                                            int order, double t);

/// Derivative as a spline of order-1 on the same knots, one extra
/// coefficient row:
///   c'_k = (m-1) (c_k - c_{k-1}) / (t_{k+m-1} - t_k),
/// rows outside the input range read as zero, and a vanishing knot
/// difference (boundary multiplicity) yields a zero row, which drops the
/// distributional jump at a closed-interval boundary.  Throws
/// OrderUnderflow at order 1.
Spline differentiate(const Spline& s);

/// Coefficients a_k of the truncated-power expansion
///   s(t) = sum_k a_k (t - t_k)_+^{m-1},
/// one row per knot.  Obtained by differentiating to order 1 and taking
/// jumps: a_k = (b_k - b_{k-1}) / (m-1)!.  For a spline representable on a
/// grid without the knot t_k, row k vanishes.
CoeffMatrix truncated_power_coeffs(const Spline& s);

/// Re-expresses s on a refinement of its knot sequence (same function, new
/// basis).  Throws NotARefinement when `fine` does not contain s.knots with
/// multiplicity.
Spline oslo_refine(const Spline& s, const KnotSequence& fine);

/// Single-knot insertion: returns s on its knots with t inserted.  Only
/// the band of rows r-m+1 .. r-1 around the insertion index r changes:
///   q_i = [(t - t_i) p_i + (t_{i+m-1} - t) p_{i-1}] / (t_{i+m-1} - t_i).
/// Throws KnotOutOfRange unless t_0 < t < t_n, ExcessMultiplicity if the
/// insertion would overfill an interior knot.
Spline boehm_insert(const Spline& s, double t);

/// Inverse of a single insertion, assuming s is exactly representable
/// without the knot at knot_index (1 <= knot_index <= size-2, else
/// IndexOutOfRange).  The backward variant eliminates right to left and is
/// the numerically stable one; the forward variant eliminates left to
/// right and exists to expose its instability.  On non-representable input
/// both return the representable spline matching all but one of the band
/// relations; they differ in which relation is dropped.
Spline remove_knot_backward(const Spline& s, std::size_t knot_index);
Spline remove_knot_forward(const Spline& s, std::size_t knot_index);

} // namespace splinewave
