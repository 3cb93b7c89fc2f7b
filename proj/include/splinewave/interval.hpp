#pragma once

#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/knots.hpp"

namespace splinewave {

/// Storage grid of a clamped spline on [breaks.front(), breaks.back()]:
/// each boundary value repeated `order` times around the strictly
/// increasing break values.  Needs at least two breaks.
std::vector<double> interval_knots(int order, const std::vector<double>& breaks);

/// Inverse of interval_knots.  Throws GridMismatch unless the grid opens
/// and closes with exactly order-fold boundary values around strictly
/// increasing interior breaks.
std::vector<double> interval_breaks(int order, const KnotSequence& knots);

/// True when `knots` has the exact clamped-storage shape for this order.
bool is_interval_grid(int order, const KnotSequence& knots);

/// Clamped spline from break values.  Coefficient rows:
/// breaks.size() - 2 + order.  The first and last coefficient rows are the
/// function values at the interval ends.
Spline make_interval_spline(int order, const std::vector<double>& breaks, CoeffMatrix coeffs);

} // namespace splinewave
