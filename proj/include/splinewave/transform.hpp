#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"
#include "splinewave/knots.hpp"
#include "splinewave/wavelet.hpp"

namespace splinewave {

/// One refinement transition together with the detail coefficients that
/// were split off at it.
struct DecompositionLevel {
    LevelGrids grids;
    CoeffMatrix details; ///< num_wavelets rows, one column per channel
};

/// Pyramid of an order-m spline: coarsest representation plus one detail
/// layer per transition, ordered coarsest first.  For whole-line splines
/// all grids and coefficients are on the phantom-extended storage; use
/// reconstruct() to get back a spline on the original knots.
struct MultiscaleDecomposition {
    WaveletParams params;
    BoundaryMode mode = BoundaryMode::WholeLine;
    KnotSequence base_knots;
    CoeffMatrix base_coeffs{0, 1, 0.0};
    std::vector<DecompositionLevel> levels;

    std::size_t channels() const { return base_coeffs.cols(); }
};

/// One analysis step on storage grids (WholeLine or Interval transitions;
/// periodic transforms have their own entry points).  Splits fine
/// coefficients into (coarse coefficients, details):
///  1. differentiate order-1 times; the jump of the resulting piecewise
///     constant at each new knot is proportional to that knot's detail,
///  2. subtract the detail windows, leaving a spline without jumps at the
///     new knots,
///  3. remove the new knots left to right; each removal touches order-2
///     rows, finalized rows stream into the output, so the sweep is linear
///     in the coefficient count.
std::pair<CoeffMatrix, CoeffMatrix> decompose_step(const LevelGrids& level,
                                                   const CoeffMatrix& fine);

/// Inverse of decompose_step: re-express the coarse part on the fine grid
/// and add the detail windows.
CoeffMatrix reconstruct_step(const LevelGrids& level, const CoeffMatrix& coarse,
                             const CoeffMatrix& details);

/// Only the detail coefficients (steps 1 of decompose_step); used when
/// deciding refinement, where the coarse part is not needed.
CoeffMatrix detail_coefficients(const LevelGrids& level, const CoeffMatrix& fine);

/// Drops every second removable knot: interior knots at odd positions for
/// WholeLine, odd break indices for Interval (boundaries always stay).
/// Returns the input unchanged when nothing can be removed.
std::vector<double> dyadic_coarsen_knots(const std::vector<double>& knots, BoundaryMode mode,
                                         int order);

/// Full analysis of a spline, at most max_levels transitions (fewer when
/// the grid bottoms out).  WholeLine input must have strictly increasing
/// knots; Interval input must carry order-fold boundary knots and strictly
/// increasing breaks.
MultiscaleDecomposition decompose(const Spline& f, const WaveletParams& params,
                                  BoundaryMode mode, int max_levels);

/// Full synthesis.  Returns a spline on the original (unextended) knots.
Spline reconstruct(const MultiscaleDecomposition& decomp);

} // namespace splinewave
