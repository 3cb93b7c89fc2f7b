#pragma once

// Slow, independently-coded reference implementations used to validate the
// fast transform paths.  Everything here favours obviousness over speed:
// dense least-squares instead of banded recurrences, explicit quadrature
// instead of closed forms.  None of these routines share logic with the
// production code they check, beyond evaluation of splines and wavelets.

#include <cstddef>
#include <utility>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"
#include "splinewave/periodic.hpp"
#include "splinewave/wavelet.hpp"

namespace splinewave {

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Returns (nodes, weights), each of length n, nodes ascending.  The rule
/// integrates polynomials up to degree 2n - 1 exactly.  Throws InvalidConfig
/// for n == 0.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n);

/// Integral of t^ell times wavelet k of the given level, by per-cell
/// Gauss quadrature of sufficient exactness.
///
/// The integrand restricted to one knot cell is a polynomial of degree
/// (order - 1) + ell, so the per-cell node count is chosen to make the
/// quadrature exact up to roundoff.  For periodic levels the integral runs
/// over the unfolded prototype support (one period image).  Throws
/// IndexOutOfRange for a bad wavelet index and InvalidConfig for ell < 0.
double moment_quadrature(const LevelGrids& level, std::size_t k, int ell);

/// Dense-sampling change of basis: expresses a spline on the fine grid in
/// the coarse-basis + wavelet basis of the level by solving one dense
/// least-squares system per call (all channels share the matrix).
///
/// Returns (coarse, details) with the same shapes the fast single-step
/// transform produces.  The sample matrix uses several points per nonempty
/// fine knot cell, always at least twice as many rows as columns.  Throws
/// GridMismatch if the spline does not live on the level's fine grid and
/// RankDeficient if the sampled basis loses rank or the residual shows the
/// spline is not representable (which would indicate a broken level).
std::pair<CoeffMatrix, CoeffMatrix> oracle_decompose(const Spline& s,
                                                     const LevelGrids& level);

/// Periodic variant of the dense change of basis.
std::pair<CoeffMatrix, CoeffMatrix> oracle_decompose(const PeriodicSpline& s,
                                                     const LevelGrids& level);

/// Extracts the wavelet filter from a uniform whole-line grid of n knots
/// with spacing one, and asserts that every interior slot of the level
/// carries the same window (translation invariance) before returning it.
///
/// On the bi-infinite uniform grid the construction degenerates to a single
/// stencil.  A finite grid emulates that away from its ends: slots whose
/// support stays inside the original span are exact translates, while the
/// outermost slot on each side reads the phantom scaffolding and is
/// genuinely boundary-adapted, so only the interior slots are compared and
/// the shared interior window (max-abs normalised, as stored in the slots)
/// is returned.  Only even order + dual_order admits the uniform
/// specialisation (the new knot must sit midway between its coarse
/// neighbours for the stencil to be symmetric); odd sums throw
/// InvalidConfig, as does an even n (keeping every other knot of an even
/// count leaves a ragged half-spacing cell at the end, which genuinely
/// breaks invariance rather than merely failing to detect it).  Throws
/// GridTooSmall for n < 3 or when no window fits inside the span, and
/// NotTranslationInvariant if any two interior slots disagree.
std::vector<double> uniform_filter_extract(const WaveletParams& params, std::size_t n);

} // namespace splinewave
