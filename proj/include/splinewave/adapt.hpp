#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"
#include "splinewave/knots.hpp"
#include "splinewave/transform.hpp"
#include "splinewave/wavelet.hpp"

namespace splinewave {

/// Detail that survived a thresholding pass: the knot it protects and its
/// coefficient per channel.
struct KeptDetail {
    std::size_t wavelet = 0;    ///< index within its level transition
    double knot = 0.0;          ///< value of the protected knot
    std::vector<double> values; ///< detail coefficient per channel
    double magnitude = 0.0;     ///< max |values|
};

/// Result of thresholded coarsening.
///
/// Every subtracted wavelet has max-abs fine-window one and magnitude below
/// the threshold, and at most order + dual_order - 1 wavelets of one pass
/// overlap any point, so the pointwise deviation of one pass is bounded by
/// (order + dual_order - 1) * epsilon.  `passes` counts only passes that
/// removed at least one knot; a pass that removes nothing subtracts nothing
/// and adds no deviation.
struct CoarsenReport {
    Spline result;                        ///< on the coarsened grid
    std::vector<double> removed_knots;    ///< knot values dropped, ascending
    std::vector<KeptDetail> kept_details; ///< survivor census of the last pass
    double error_bound = 0.0;             ///< (order + dual_order - 1) * passes * threshold
    double threshold = 0.0;
    int passes = 0; ///< passes that removed at least one knot
};

/// One thresholding pass over an explicit level transition.  The spline must
/// live on the level's fine grid.  Wavelets whose detail magnitude (max-abs
/// across channels) is strictly below epsilon are subtracted and their knots
/// removed; everything else stays in the result.  Whole-line callers pass
/// grids whose wavelet windows are interior, exactly as for decompose_step.
/// Periodic levels are rejected.
CoarsenReport coarsen(const Spline& s, const LevelGrids& level, double epsilon);

/// Repeated thresholding on dyadically derived transitions: each pass
/// coarsens every second removable knot candidate of the current grid and
/// keeps those whose details the function still needs.  Stops early once a
/// pass removes nothing or the grid cannot form another transition.
///
/// Whole-line inputs are padded with phantom knots internally so boundary
/// windows become interior; wavelets whose windows touch the padding are
/// never removed (subtracting them would shift mass onto the scaffolding),
/// which keeps the result on a subset of the input knots.
CoarsenReport coarsen_repeated(const Spline& s, const WaveletParams& params, BoundaryMode mode,
                               double epsilon, int passes);

/// Position of one wavelet's knot inside a grid, with the detail magnitude
/// that was measured for it.
struct DetailMark {
    std::size_t knot_index = 0;
    double magnitude = 0.0;
};

/// Knot insertion driven by detail magnitudes: each marked knot receives
/// floor(|d| * alpha / max|d|) equidistant knots in both flanking intervals,
/// so only wavelets with |d| >= max|d| / alpha cause insertions and the
/// count grows with |d|.  Zero-length flanks (boundary multiplicity) are
/// skipped; insertions landing on identical positions collapse to one knot.
/// Returns the grid unchanged when all magnitudes vanish.
std::vector<double> refine_grid(const std::vector<double>& knots,
                                const std::vector<DetailMark>& details, double alpha);

using ScalarFunction = std::function<double(double)>;

/// Approximation backend for refine_loop: produces a spline living exactly
/// on the given storage grid.  The third argument is an optional warm start
/// (the previous iterate re-expressed on the grid), the fourth an inner
/// tolerance; direct methods may ignore both.
using ApproximationMethod =
    std::function<Spline(const ScalarFunction&, const KnotSequence&, const Spline*, double)>;

/// Interpolation at knot averages as an ApproximationMethod.
ApproximationMethod interpolation_method(int order);

struct RefineConfig {
    double alpha = 2.5;   ///< refinement rate, must exceed one
    double epsilon = 1e-3; ///< stop once successive iterates differ less
    int max_iters = 20;
    bool final_coarsen = false;   ///< run one thresholding pass on the result
    double coarsen_epsilon = 0.0; ///< threshold for it; <= 0 means epsilon / 10
    int sample_points = 1024;     ///< resolution of the sampled sup norm
};

/// One refinement iterate.
struct RefineRecord {
    std::size_t grid_size = 0; ///< storage knots of this iterate
    double change = 0.0;       ///< sampled sup vs the previous iterate (inf for the first)
    double sup_error = 0.0;    ///< sampled sup vs the target function
};

struct RefineResult {
    Spline approximation;
    std::vector<RefineRecord> history; ///< initial approximation first
    bool converged = false;            ///< change dropped below epsilon
    int iterations = 0;                ///< refinement steps after the initial approximation
};

/// Detail-driven grid refinement on a closed interval: approximate on the
/// current grid, measure one level of detail coefficients, insert knots
/// around the large ones, and re-approximate with the previous iterate as
/// warm start, until successive iterates agree within epsilon or max_iters
/// is hit (converged flag false, best iterate returned).  The initial grid
/// must carry boundary knots of multiplicity order.
RefineResult refine_loop(const ScalarFunction& f, const ApproximationMethod& method,
                         const KnotSequence& initial_grid, const WaveletParams& params,
                         const RefineConfig& config);

/// Spline interpolating f at the knot averages
///   site_k = (t_{k+1} + ... + t_{k+order-1}) / (order - 1),
/// solved through a banded collocation system with partial pivoting.
/// Throws OrderUnderflow below order 2 and SingularSystem when the sites do
/// not determine a unique interpolant.
Spline interpolate(const ScalarFunction& f, const KnotSequence& grid, int order);

} // namespace splinewave
