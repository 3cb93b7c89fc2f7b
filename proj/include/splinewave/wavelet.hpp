#pragma once

#include <cstddef>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"
#include "splinewave/knots.hpp"

namespace splinewave {

/// How the ends of the knot range are interpreted.
enum class BoundaryMode {
    WholeLine, ///< compactly supported splines on simple knots
    Periodic,  ///< one period of knots stored, everything wraps
    Interval,  ///< boundary knots of full multiplicity, splines live on [a, b]
};

struct WaveletParams {
    int order = 4;      ///< order m of the spline space being transformed
    int dual_order = 2; ///< number of vanishing moments of the wavelets

    /// Split of the m + dual_order prototype knots around the new knot.
    int ell1() const { return (order + dual_order) / 2; }
    int ell2() const { return order + dual_order - ell1(); }
};

/// One wavelet of a level transition.
///
/// The prototype is an order m + dual_order B-spline on the short knot
/// vector xi (dual_order + ell coarse knots around one new knot),
/// differentiated dual_order times, which makes it an order-m spline with
/// dual_order vanishing moments.  A scale factor alpha = 1/max|window|
/// normalizes the largest fine-basis coefficient to one.
struct WaveletSlot {
    double new_value = 0.0;          ///< value of the inserted knot
    std::ptrdiff_t new_fine_index = 0; ///< its index in the fine storage (signed: periodic windows may wrap)
    std::vector<double> xi;          ///< prototype knots (coarse values + the new knot)
    std::size_t new_pos = 0;         ///< position of new_value inside xi
    CoeffMatrix xi_coeffs;           ///< order-m rows on xi, scaled by alpha
    std::vector<double> b;           ///< coefficients on the fine basis, scaled by alpha
    std::ptrdiff_t b_offset;         ///< fine coefficient index of b[0] (signed, see new_fine_index)
    double rho_jump = 0.0;           ///< jump of the (m-1)-fold derivative at the new knot, scaled by alpha
    double gamma = 0.0;              ///< rho_jump / (m-1)!
    double alpha = 1.0;              ///< normalization actually applied
};

/// One refinement transition coarse -> fine with its wavelets.
///
/// Grid conventions by mode:
///  - WholeLine: both sequences are the extended storage (the transform
///    layer pads user grids with phantom knots); every new knot must keep
///    ell1-1 coarse knots to its left and ell2-1 to its right.
///  - Interval: full storage with boundary knots of multiplicity exactly
///    order on both grids.
///  - Periodic: one period of strictly increasing knot values per grid
///    plus the period length; new knots may precede the first coarse knot.
struct LevelGrids {
    WaveletParams params;
    BoundaryMode mode = BoundaryMode::WholeLine;
    KnotSequence coarse;
    KnotSequence fine;
    double period = 0.0;
    std::vector<std::size_t> new_indices; ///< fine storage indices of inserted knots
    std::vector<WaveletSlot> slots;       ///< one per new index, same order

    std::size_t num_wavelets() const { return slots.size(); }
};

/// Builds the transition and all wavelet slots.  Throws GridMismatch /
/// NotARefinement / GridTooSmall / PeriodMismatch / KnotOutOfRange on
/// inconsistent input and ZeroGamma if a prototype degenerates.
LevelGrids build_level(const WaveletParams& params, BoundaryMode mode, KnotSequence coarse,
                       KnotSequence fine, double period = 0.0);

/// Pads a strictly increasing grid with `lo` knots before the first and
/// `hi` after the last, continuing the end spacings.  The transform layer
/// uses this to make every whole-line wavelet window interior.
std::vector<double> phantom_extension(const std::vector<double>& knots, int lo, int hi);

/// Point value of wavelet k.  Periodic wavelets are evaluated as the sum
/// of their period shifts.
double eval_wavelet(const LevelGrids& level, std::size_t k, double t);

} // namespace splinewave
