#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "splinewave/coeff_matrix.hpp"
#include "splinewave/knots.hpp"
#include "splinewave/wavelet.hpp"

namespace splinewave {

/// Spline on a periodically extended knot grid.
///
/// One period is stored: `knots` holds n strictly increasing values
/// spanning less than `period`, and the full grid is knot(j + n) =
/// knot(j) + period.  Coefficients repeat with the same stride
/// (c_{k+n} = c_k), so the stored matrix has exactly n rows, one per
/// basis function of the period.  Row k pairs with the B-spline
/// supported on [knot(k), knot(k+m)] in extended indexing.
struct PeriodicSpline {
    int order = 0;
    KnotSequence knots;
    double period = 0.0;
    CoeffMatrix coeffs;

    std::size_t channels() const { return coeffs.cols(); }
};

/// Validates and assembles a periodic spline (strictly increasing knots,
/// span below the period, one coefficient row per knot).
PeriodicSpline make_periodic_spline(int order, std::vector<double> knots, double period,
                                    CoeffMatrix coeffs);

/// Values of all channels at t (any real number; evaluation folds t into
/// the stored period).
std::vector<double> eval_periodic(const PeriodicSpline& s, double t);

/// Derivative, order drops by one.  The knot grid has no repeated values,
/// so every divided difference in the formula is well posed.
PeriodicSpline differentiate_periodic(const PeriodicSpline& s);

/// Re-expresses the spline on a finer periodic grid describing the same
/// circle: strictly increasing, span below the period, starting at or
/// before the current origin, containing every current knot modulo the
/// period.
PeriodicSpline periodic_refine(const PeriodicSpline& s, const KnotSequence& fine);

/// One analysis transition between periodic grids (grids.mode must be
/// Periodic).  Returns the coarse coefficients (rows follow the coarse
/// stored order) and one detail row per new knot.
std::pair<CoeffMatrix, CoeffMatrix> periodic_decompose_step(const LevelGrids& level,
                                                            const CoeffMatrix& fine);

/// Inverse of periodic_decompose_step.
CoeffMatrix periodic_reconstruct_step(const LevelGrids& level, const CoeffMatrix& coarse,
                                      const CoeffMatrix& details);

struct PeriodicDecompositionLevel {
    LevelGrids grids;
    CoeffMatrix details;
};

/// Pyramid of a periodic spline, ordered coarsest first.
struct PeriodicDecomposition {
    WaveletParams params;
    double period = 0.0;
    KnotSequence base_knots;
    CoeffMatrix base_coeffs{0, 1, 0.0};
    std::vector<PeriodicDecompositionLevel> levels;

    std::size_t channels() const { return base_coeffs.cols(); }
};

/// Full analysis: drops every second knot per transition, at most
/// max_levels transitions, stopping once a coarser grid would fall below
/// order + dual_order knots per period.
PeriodicDecomposition periodic_decompose(const PeriodicSpline& f, const WaveletParams& params,
                                         int max_levels);

/// Full synthesis.
PeriodicSpline periodic_reconstruct(const PeriodicDecomposition& decomp);

} // namespace splinewave
