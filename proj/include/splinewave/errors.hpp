#pragma once

#include <stdexcept>
#include <string>

namespace splinewave {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Knot sequence is not nondecreasing.
class DecreasingKnots : public Error { using Error::Error; };

/// Knot multiplicity exceeds what the order admits (m-1 in the interior,
/// m at a closed-interval boundary).
class ExcessMultiplicity : public Error { using Error::Error; };

/// Evaluation point lies outside the knot span.
class OutOfSupport : public Error { using Error::Error; };

/// Differentiation requested below order 1.
class OrderUnderflow : public Error { using Error::Error; };

/// Target grid does not contain the source grid (with multiplicity).
class NotARefinement : public Error { using Error::Error; };

/// Knot to insert lies outside the admissible span.
class KnotOutOfRange : public Error { using Error::Error; };

/// Coefficient or knot index outside the valid range.
class IndexOutOfRange : public Error { using Error::Error; };

/// Coarse/fine grid pair violates the nesting or alternation structure.
class NotNested : public Error { using Error::Error; };

/// Wavelet knot window has zero length or is otherwise degenerate.
class DegenerateKnots : public Error { using Error::Error; };

/// Spline does not live on the grid the operation expects.
class GridMismatch : public Error { using Error::Error; };

/// Wavelet normalization factor vanished; the level pair is broken.
class ZeroGamma : public Error { using Error::Error; };

/// Periodic data disagrees about period or per-period knot count.
class PeriodMismatch : public Error { using Error::Error; };

/// Grid cannot support the requested level or wavelet construction.
class GridTooSmall : public Error { using Error::Error; };

/// Collocation system is numerically singular.
class SingularSystem : public Error { using Error::Error; };

/// Configuration value outside its documented domain.
class InvalidConfig : public Error { using Error::Error; };

/// Dense change-of-basis system lost rank.
class RankDeficient : public Error { using Error::Error; };

/// Uniform-grid filter windows differ where they must coincide.
class NotTranslationInvariant : public Error { using Error::Error; };

/// Malformed input file.
class ParseError : public Error { using Error::Error; };

} // namespace splinewave
