#pragma once

// Text serialization for splines and multiscale decompositions, plus the
// CSV emitter used for plot output.
//
// Both container formats are token streams: whitespace-separated keywords
// and numbers with a leading format tag and a trailing "end" marker, so
// truncation is always detected.  Floating-point values are written with
// 17 significant digits, which round-trips IEEE doubles exactly; files are
// therefore diff-able and lossless.  Read errors throw ParseError with a
// message naming the offending field; write-side domain violations (bad
// labels, non-finite values) throw InvalidConfig.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "splinewave/bspline.hpp"
#include "splinewave/coeff_matrix.hpp"
#include "splinewave/periodic.hpp"
#include "splinewave/transform.hpp"
#include "splinewave/wavelet.hpp"

namespace splinewave {

/// One spline as stored on disk: the grid, the coefficient matrix, the
/// boundary flavour it should be transformed under, and one label per
/// channel (used for CSV headers).  `period` is positive exactly for
/// periodic files and zero otherwise.
struct SplineFile {
    int order = 0;
    BoundaryMode mode = BoundaryMode::WholeLine;
    double period = 0.0;
    std::vector<double> knots;
    CoeffMatrix coeffs;
    std::vector<std::string> labels;

    std::size_t channels() const { return coeffs.cols(); }
};

/// A serialized pyramid: the coarsest representation plus, per transition
/// from coarse to fine, the values of the knots that transition inserted
/// and the detail coefficients split off at them.  Levels are ordered
/// coarsest first; each level's fine grid is reproducible as the sorted
/// union of the previous grid and the level's new knots, so the file needs
/// no redundant grid copies.
struct DecompositionFile {
    WaveletParams params;
    BoundaryMode mode = BoundaryMode::WholeLine;
    double period = 0.0;
    std::vector<double> base_knots;
    CoeffMatrix base_coeffs;
    std::vector<std::string> labels;

    struct Level {
        std::vector<double> new_knots; ///< ascending, one per wavelet
        CoeffMatrix details;           ///< one row per new knot
    };
    std::vector<Level> levels;

    std::size_t channels() const { return base_coeffs.cols(); }
};

/// "y0", "y1", ... — the labels used when none are given.
std::vector<std::string> default_labels(std::size_t n);

// ---- spline files ----

/// Serializes to the token format.  Throws InvalidConfig for non-finite
/// values, malformed labels (labels must be single tokens without commas),
/// a label count that disagrees with the channel count, or a period that
/// contradicts the boundary mode.
void write_spline_file(std::ostream& out, const SplineFile& file);
void write_spline_file(const std::string& path, const SplineFile& file);

/// Parses the token format.  Throws ParseError on malformed input, with
/// the offending field named (unknown keywords, non-numeric values,
/// decreasing knots by index, coefficient shape mismatches, truncation).
SplineFile read_spline_file(std::istream& in);
SplineFile read_spline_file(const std::string& path);

/// Assembles the in-memory spline a non-periodic file describes.  Interval
/// files must carry order-fold boundary knots.  Throws GridMismatch when
/// called on a periodic file.
Spline to_spline(const SplineFile& file);

/// Assembles the periodic spline a periodic file describes.  Throws
/// GridMismatch when called on a non-periodic file.
PeriodicSpline to_periodic_spline(const SplineFile& file);

/// Wraps a spline for writing.  Empty labels mean defaults.
SplineFile from_spline(const Spline& s, BoundaryMode mode,
                       std::vector<std::string> labels = {});
SplineFile from_periodic_spline(const PeriodicSpline& s,
                                std::vector<std::string> labels = {});

// ---- decomposition files ----

/// Serializes / parses the pyramid container.  Same error conventions as
/// the spline-file functions.
void write_decomposition_file(std::ostream& out, const DecompositionFile& file);
void write_decomposition_file(const std::string& path, const DecompositionFile& file);
DecompositionFile read_decomposition_file(std::istream& in);
DecompositionFile read_decomposition_file(const std::string& path);

/// Extracts the serializable view of a pyramid.  Verifies that every
/// level's fine grid is the sorted union of its coarse grid and its new
/// knots (true for every pyramid the decompose routines produce) and
/// throws GridMismatch otherwise, because such a level could not be
/// rebuilt faithfully from the file.  Empty labels mean defaults.
DecompositionFile to_file(const MultiscaleDecomposition& decomp,
                          std::vector<std::string> labels = {});
DecompositionFile to_file(const PeriodicDecomposition& decomp,
                          std::vector<std::string> labels = {});

/// Rebuilds the in-memory pyramid, reconstructing each level's grids from
/// the sorted union and re-deriving the wavelet construction.  Throws
/// GridMismatch if the file's mode disagrees with the requested flavour or
/// a detail block does not match its level's wavelet count.
MultiscaleDecomposition multiscale_from_file(const DecompositionFile& file);
PeriodicDecomposition periodic_from_file(const DecompositionFile& file);

// ---- CSV ----

/// Writes a CSV table: header row then one row per entry, comma-separated,
/// newline-terminated, values at 17 significant digits.  Throws
/// InvalidConfig if a row's width differs from the header's or a header
/// cell contains a comma.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace splinewave
