#include "splinewave/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "splinewave/errors.hpp"
#include "splinewave/interval.hpp"

namespace splinewave {

namespace {

constexpr const char* kSplineTag = "splinewave-spline-v1";
constexpr const char* kDecompTag = "splinewave-decomposition-v1";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* mode_word(BoundaryMode mode) {
    switch (mode) {
        case BoundaryMode::WholeLine: return "whole-line";
        case BoundaryMode::Interval: return "interval";
        case BoundaryMode::Periodic: return "periodic";
    }
    throw InvalidConfig("unknown boundary mode value");
}

BoundaryMode parse_mode(const std::string& word) {
    if (word == "whole-line") return BoundaryMode::WholeLine;
    if (word == "interval") return BoundaryMode::Interval;
    if (word == "periodic") return BoundaryMode::Periodic;
    throw ParseError("unknown boundary mode: " + word);
}

// Pulls whitespace-separated tokens off a stream with contextual errors.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next(const std::string& what) {
        std::string tok;
        if (!(in_ >> tok)) throw ParseError("file ends before " + what);
        return tok;
    }

    void expect(const std::string& keyword) {
        const std::string tok = next("keyword '" + keyword + "'");
        if (tok != keyword)
            throw ParseError("expected keyword '" + keyword + "', found '" + tok + "'");
    }

    long read_int(const std::string& what, long lo, long hi) {
        const std::string tok = next(what);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw ParseError(what + " is not an integer: '" + tok + "'");
        }
        if (used != tok.size())
            throw ParseError(what + " is not an integer: '" + tok + "'");
        if (v < lo || v > hi) throw ParseError(what + " is out of range: " + tok);
        return v;
    }

    std::size_t read_count(const std::string& what) {
        return static_cast<std::size_t>(read_int(what, 0, 100000000L));
    }

    double read_double(const std::string& what) {
        const std::string tok = next(what);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ParseError(what + " is not a number: '" + tok + "'");
        }
        if (used != tok.size())
            throw ParseError(what + " is not a number: '" + tok + "'");
        if (!std::isfinite(v)) throw ParseError(what + " is not finite: '" + tok + "'");
        return v;
    }

private:
    std::istream& in_;
};

void check_label(const std::string& label) {
    if (label.empty()) throw InvalidConfig("channel labels cannot be empty");
    for (char c : label)
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            throw InvalidConfig("channel labels must be single tokens without commas");
}

std::vector<std::string> resolve_labels(std::vector<std::string> labels, std::size_t nch) {
    if (labels.empty()) return default_labels(nch);
    if (labels.size() != nch)
        throw InvalidConfig("label count does not match the channel count");
    for (const std::string& l : labels) check_label(l);
    return labels;
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidConfig(std::string(what) + " must be finite");
}

void write_values(std::ostream& out, const std::vector<double>& values) {
    for (double v : values) {
        check_finite(v, "knot values");
        out << fmt_double(v) << "\n";
    }
}

void write_matrix(std::ostream& out, const CoeffMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            check_finite(m(r, c), "coefficients");
            if (c) out << ' ';
            out << fmt_double(m(r, c));
        }
        out << "\n";
    }
}

// Reads `count` knot values, enforcing the ordering the mode requires and
// naming the first offending index on violation.
std::vector<double> read_knot_block(TokenReader& tr, std::size_t count, bool strict,
                                    const std::string& what) {
    std::vector<double> knots(count);
    for (std::size_t i = 0; i < count; ++i) {
        knots[i] = tr.read_double(what + " " + std::to_string(i));
        if (i > 0) {
            if (strict && knots[i] <= knots[i - 1])
                throw ParseError(what + " " + std::to_string(i) +
                                 " does not increase past " + what + " " +
                                 std::to_string(i - 1));
            if (!strict && knots[i] < knots[i - 1])
                throw ParseError(what + " " + std::to_string(i) + " decreases below " +
                                 what + " " + std::to_string(i - 1));
        }
    }
    return knots;
}

CoeffMatrix read_matrix(TokenReader& tr, std::size_t rows, std::size_t cols,
                        const std::string& what) {
    CoeffMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = tr.read_double(what + " row " + std::to_string(r) + " column " +
                                     std::to_string(c));
    return m;
}

std::vector<std::string> read_labels(TokenReader& tr, std::size_t nch) {
    tr.expect("labels");
    std::vector<std::string> labels(nch);
    for (std::size_t i = 0; i < nch; ++i) {
        labels[i] = tr.next("label " + std::to_string(i));
        if (labels[i].find(',') != std::string::npos)
            throw ParseError("label " + std::to_string(i) + " contains a comma");
    }
    return labels;
}

std::size_t basis_count_for(BoundaryMode mode, std::size_t nknots, int order) {
    if (mode == BoundaryMode::Periodic) return nknots;
    if (nknots < static_cast<std::size_t>(order))
        throw ParseError("too few knots for the order");
    return nknots - static_cast<std::size_t>(order);
}

std::vector<double> merged(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

// Shared serialization of the grid-agnostic level list.  `news` holds the
// values of the new knots of one transition, ascending.
template <class LevelVec, class NewKnotsOf, class DetailsOf>
std::vector<DecompositionFile::Level> collect_levels(const LevelVec& levels,
                                                     NewKnotsOf&& news_of,
                                                     DetailsOf&& details_of) {
    std::vector<DecompositionFile::Level> out;
    out.reserve(levels.size());
    for (const auto& level : levels) {
        DecompositionFile::Level fl;
        fl.new_knots = news_of(level);
        fl.details = details_of(level);
        out.push_back(std::move(fl));
    }
    return out;
}

std::vector<double> new_knot_values(const LevelGrids& grids) {
    std::vector<double> news;
    news.reserve(grids.new_indices.size());
    for (std::size_t idx : grids.new_indices) news.push_back(grids.fine[idx]);
    return news;
}

void verify_union(const LevelGrids& grids, const std::vector<double>& news) {
    if (merged(grids.coarse.values(), news) != grids.fine.values())
        throw GridMismatch(
            "decomposition levels must be sorted unions of coarse grids and new knots");
}

} // namespace

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "y" + std::to_string(i);
    return labels;
}

// ---- spline files ----

void write_spline_file(std::ostream& out, const SplineFile& file) {
    if (file.order < 1) throw InvalidConfig("spline order must be positive");
    const bool periodic = file.mode == BoundaryMode::Periodic;
    if (periodic && !(file.period > 0.0))
        throw InvalidConfig("periodic files need a positive period");
    if (!periodic && file.period != 0.0)
        throw InvalidConfig("only periodic files carry a period");
    check_finite(file.period, "the period");
    const std::vector<std::string> labels = resolve_labels(file.labels, file.channels());

    out << kSplineTag << "\n";
    out << "order " << file.order << "\n";
    out << "boundary " << mode_word(file.mode) << "\n";
    if (periodic) out << "period " << fmt_double(file.period) << "\n";
    out << "channels " << file.channels() << "\n";
    out << "labels";
    for (const std::string& l : labels) out << ' ' << l;
    out << "\n";
    out << "knots " << file.knots.size() << "\n";
    write_values(out, file.knots);
    out << "coeffs " << file.coeffs.rows() << ' ' << file.coeffs.cols() << "\n";
    write_matrix(out, file.coeffs);
    out << "end\n";
    if (!out) throw ParseError("write failed");
}

void write_spline_file(const std::string& path, const SplineFile& file) {
    std::ofstream out = open_out(path);
    write_spline_file(out, file);
}

SplineFile read_spline_file(std::istream& in) {
    TokenReader tr(in);
    const std::string tag = tr.next("the format tag");
    if (tag != kSplineTag) throw ParseError("not a spline file (format tag: " + tag + ")");

    SplineFile file;
    tr.expect("order");
    file.order = static_cast<int>(tr.read_int("the order", 1, 64));
    tr.expect("boundary");
    file.mode = parse_mode(tr.next("the boundary mode"));
    if (file.mode == BoundaryMode::Periodic) {
        tr.expect("period");
        file.period = tr.read_double("the period");
        if (!(file.period > 0.0)) throw ParseError("the period must be positive");
    }
    tr.expect("channels");
    const std::size_t nch = tr.read_count("the channel count");
    file.labels = read_labels(tr, nch);

    tr.expect("knots");
    const std::size_t nknots = tr.read_count("the knot count");
    file.knots = read_knot_block(tr, nknots, file.mode == BoundaryMode::Periodic, "knot");

    tr.expect("coeffs");
    const std::size_t rows = tr.read_count("the coefficient row count");
    const std::size_t cols = tr.read_count("the coefficient column count");
    if (cols != nch)
        throw ParseError("coefficient columns do not match the channel count");
    if (rows != basis_count_for(file.mode, nknots, file.order))
        throw ParseError("coefficient rows do not match the basis count");
    file.coeffs = read_matrix(tr, rows, cols, "coefficient");
    tr.expect("end");
    return file;
}

SplineFile read_spline_file(const std::string& path) {
    std::ifstream in = open_in(path);
    return read_spline_file(in);
}

Spline to_spline(const SplineFile& file) {
    if (file.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic files describe periodic splines");
    Spline s = make_spline(file.order, file.knots, file.coeffs);
    if (file.mode == BoundaryMode::Interval && !is_interval_grid(file.order, s.knots))
        throw GridMismatch("interval files need order-fold boundary knots");
    return s;
}

PeriodicSpline to_periodic_spline(const SplineFile& file) {
    if (file.mode != BoundaryMode::Periodic)
        throw GridMismatch("only periodic files describe periodic splines");
    return make_periodic_spline(file.order, file.knots, file.period, file.coeffs);
}

SplineFile from_spline(const Spline& s, BoundaryMode mode, std::vector<std::string> labels) {
    if (mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic files describe periodic splines");
    SplineFile file;
    file.order = s.order;
    file.mode = mode;
    file.knots = s.knots.values();
    file.coeffs = s.coeffs;
    file.labels = resolve_labels(std::move(labels), s.channels());
    return file;
}

SplineFile from_periodic_spline(const PeriodicSpline& s, std::vector<std::string> labels) {
    SplineFile file;
    file.order = s.order;
    file.mode = BoundaryMode::Periodic;
    file.period = s.period;
    file.knots = s.knots.values();
    file.coeffs = s.coeffs;
    file.labels = resolve_labels(std::move(labels), s.channels());
    return file;
}

// ---- decomposition files ----

void write_decomposition_file(std::ostream& out, const DecompositionFile& file) {
    if (file.params.order < 1 || file.params.dual_order < 1)
        throw InvalidConfig("wavelet orders must be positive");
    const bool periodic = file.mode == BoundaryMode::Periodic;
    if (periodic && !(file.period > 0.0))
        throw InvalidConfig("periodic files need a positive period");
    if (!periodic && file.period != 0.0)
        throw InvalidConfig("only periodic files carry a period");
    const std::vector<std::string> labels = resolve_labels(file.labels, file.channels());

    out << kDecompTag << "\n";
    out << "order " << file.params.order << "\n";
    out << "dual " << file.params.dual_order << "\n";
    out << "boundary " << mode_word(file.mode) << "\n";
    if (periodic) out << "period " << fmt_double(file.period) << "\n";
    out << "channels " << file.channels() << "\n";
    out << "labels";
    for (const std::string& l : labels) out << ' ' << l;
    out << "\n";
    out << "base-knots " << file.base_knots.size() << "\n";
    write_values(out, file.base_knots);
    out << "base-coeffs " << file.base_coeffs.rows() << ' ' << file.base_coeffs.cols()
        << "\n";
    write_matrix(out, file.base_coeffs);
    out << "levels " << file.levels.size() << "\n";
    for (const DecompositionFile::Level& level : file.levels) {
        out << "level " << level.new_knots.size() << "\n";
        write_values(out, level.new_knots);
        out << "details " << level.details.rows() << ' ' << level.details.cols() << "\n";
        write_matrix(out, level.details);
    }
    out << "end\n";
    if (!out) throw ParseError("write failed");
}

void write_decomposition_file(const std::string& path, const DecompositionFile& file) {
    std::ofstream out = open_out(path);
    write_decomposition_file(out, file);
}

DecompositionFile read_decomposition_file(std::istream& in) {
    TokenReader tr(in);
    const std::string tag = tr.next("the format tag");
    if (tag != kDecompTag)
        throw ParseError("not a decomposition file (format tag: " + tag + ")");

    DecompositionFile file;
    tr.expect("order");
    file.params.order = static_cast<int>(tr.read_int("the order", 1, 64));
    tr.expect("dual");
    file.params.dual_order = static_cast<int>(tr.read_int("the dual order", 1, 64));
    tr.expect("boundary");
    file.mode = parse_mode(tr.next("the boundary mode"));
    if (file.mode == BoundaryMode::Periodic) {
        tr.expect("period");
        file.period = tr.read_double("the period");
        if (!(file.period > 0.0)) throw ParseError("the period must be positive");
    }
    tr.expect("channels");
    const std::size_t nch = tr.read_count("the channel count");
    file.labels = read_labels(tr, nch);

    tr.expect("base-knots");
    const std::size_t nknots = tr.read_count("the base knot count");
    file.base_knots =
        read_knot_block(tr, nknots, file.mode == BoundaryMode::Periodic, "base knot");

    tr.expect("base-coeffs");
    const std::size_t rows = tr.read_count("the base coefficient row count");
    const std::size_t cols = tr.read_count("the base coefficient column count");
    if (cols != nch)
        throw ParseError("base coefficient columns do not match the channel count");
    if (rows != basis_count_for(file.mode, nknots, file.params.order))
        throw ParseError("base coefficient rows do not match the basis count");
    file.base_coeffs = read_matrix(tr, rows, cols, "base coefficient");

    tr.expect("levels");
    const std::size_t nlevels = tr.read_count("the level count");
    file.levels.reserve(nlevels);
    for (std::size_t li = 0; li < nlevels; ++li) {
        const std::string which = "level " + std::to_string(li);
        tr.expect("level");
        const std::size_t nnew = tr.read_count("the new-knot count of " + which);
        DecompositionFile::Level level;
        level.new_knots = read_knot_block(tr, nnew, true, which + " new knot");
        tr.expect("details");
        const std::size_t drows = tr.read_count("the detail row count of " + which);
        const std::size_t dcols = tr.read_count("the detail column count of " + which);
        if (drows != nnew)
            throw ParseError("detail rows of " + which + " do not match its new knots");
        if (dcols != nch)
            throw ParseError("detail columns of " + which +
                             " do not match the channel count");
        level.details = read_matrix(tr, drows, dcols, which + " detail");
        file.levels.push_back(std::move(level));
    }
    tr.expect("end");
    return file;
}

DecompositionFile read_decomposition_file(const std::string& path) {
    std::ifstream in = open_in(path);
    return read_decomposition_file(in);
}

DecompositionFile to_file(const MultiscaleDecomposition& decomp,
                          std::vector<std::string> labels) {
    if (decomp.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic pyramids use their own container");
    DecompositionFile file;
    file.params = decomp.params;
    file.mode = decomp.mode;
    file.base_knots = decomp.base_knots.values();
    file.base_coeffs = decomp.base_coeffs;
    file.labels = resolve_labels(std::move(labels), decomp.channels());
    file.levels = collect_levels(
        decomp.levels,
        [](const DecompositionLevel& level) {
            std::vector<double> news = new_knot_values(level.grids);
            verify_union(level.grids, news);
            return news;
        },
        [](const DecompositionLevel& level) { return level.details; });
    return file;
}

DecompositionFile to_file(const PeriodicDecomposition& decomp,
                          std::vector<std::string> labels) {
    DecompositionFile file;
    file.params = decomp.params;
    file.mode = BoundaryMode::Periodic;
    file.period = decomp.period;
    file.base_knots = decomp.base_knots.values();
    file.base_coeffs = decomp.base_coeffs;
    file.labels = resolve_labels(std::move(labels), decomp.channels());
    file.levels = collect_levels(
        decomp.levels,
        [](const PeriodicDecompositionLevel& level) {
            std::vector<double> news = new_knot_values(level.grids);
            verify_union(level.grids, news);
            return news;
        },
        [](const PeriodicDecompositionLevel& level) { return level.details; });
    return file;
}

MultiscaleDecomposition multiscale_from_file(const DecompositionFile& file) {
    if (file.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic files rebuild periodic pyramids");
    MultiscaleDecomposition decomp;
    decomp.params = file.params;
    decomp.mode = file.mode;
    decomp.base_knots = KnotSequence(file.base_knots);
    decomp.base_coeffs = file.base_coeffs;
    std::vector<double> cur = file.base_knots;
    for (const DecompositionFile::Level& fl : file.levels) {
        std::vector<double> fine = merged(cur, fl.new_knots);
        DecompositionLevel level{build_level(file.params, file.mode, KnotSequence(cur),
                                             KnotSequence(fine), 0.0),
                                 fl.details};
        if (level.grids.num_wavelets() != fl.details.rows())
            throw GridMismatch("detail rows do not match the level's wavelets");
        decomp.levels.push_back(std::move(level));
        cur = std::move(fine);
    }
    return decomp;
}

PeriodicDecomposition periodic_from_file(const DecompositionFile& file) {
    if (file.mode != BoundaryMode::Periodic)
        throw GridMismatch("only periodic files rebuild periodic pyramids");
    PeriodicDecomposition decomp;
    decomp.params = file.params;
    decomp.period = file.period;
    decomp.base_knots = KnotSequence(file.base_knots);
    decomp.base_coeffs = file.base_coeffs;
    std::vector<double> cur = file.base_knots;
    for (const DecompositionFile::Level& fl : file.levels) {
        std::vector<double> fine = merged(cur, fl.new_knots);
        PeriodicDecompositionLevel level{
            build_level(file.params, BoundaryMode::Periodic, KnotSequence(cur),
                        KnotSequence(fine), file.period),
            fl.details};
        if (level.grids.num_wavelets() != fl.details.rows())
            throw GridMismatch("detail rows do not match the level's wavelets");
        decomp.levels.push_back(std::move(level));
        cur = std::move(fine);
    }
    return decomp;
}

// ---- CSV ----

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (const std::string& cell : header)
        if (cell.find(',') != std::string::npos)
            throw InvalidConfig("CSV header cells cannot contain commas");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << "\n";
    for (const std::vector<double>& row : rows) {
        if (row.size() != header.size())
            throw InvalidConfig("CSV rows must match the header width");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            check_finite(row[i], "CSV values");
            out << fmt_double(row[i]);
        }
        out << "\n";
    }
    if (!out) throw ParseError("write failed");
}

} // namespace splinewave
