// Command-line front end: sampling, multiscale analysis/synthesis,
// threshold compression, and adaptive approximation of spline data.
//
// Conventions shared by every subcommand:
//   - the machine-readable artifact (CSV or container file) goes to
//     --output, or to stdout when --output is absent;
//   - human-readable reports and iteration logs go to stderr;
//   - exit 0 on success, 1 on usage errors (bad flags, flag/file mode
//     conflicts), 2 on data errors (unreadable or inconsistent inputs),
//     3 when a requested verification fails or refinement does not
//     converge (the artifact is still written in both cases).

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "splinewave/adapt.hpp"
#include "splinewave/bspline.hpp"
#include "splinewave/errors.hpp"
#include "splinewave/interval.hpp"
#include "splinewave/io.hpp"
#include "splinewave/oracle.hpp"
#include "splinewave/periodic.hpp"
#include "splinewave/transform.hpp"
#include "splinewave/wavelet.hpp"

namespace {

using namespace splinewave;

constexpr double kPi = 3.14159265358979323846;
constexpr double kVerifyTol = 1e-8;      // oracle agreement, absolute per unit scale
constexpr std::size_t kVerifyMaxKnots = 64;
constexpr int kHistogramBins = 10;
constexpr int kDeviationSamples = 2000;
constexpr int kMaxRefineIters = 20;

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

// The boundary field of the file is authoritative; mode flags merely assert
// it.  A conflicting flag is a usage error.
bool mode_flags_match(BoundaryMode mode, bool periodic_flag, bool interval_flag,
                      std::string& msg) {
    if (periodic_flag && interval_flag) {
        msg = "--periodic and --interval exclude each other";
        return false;
    }
    if (periodic_flag && mode != BoundaryMode::Periodic) {
        msg = "--periodic given, but the file is not periodic";
        return false;
    }
    if (interval_flag && mode != BoundaryMode::Interval) {
        msg = "--interval given, but the file does not carry an interval grid";
        return false;
    }
    return true;
}

template <class WriteFn>
void emit(const std::string& path, WriteFn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    fn(out);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double matrix_max_diff(const CoeffMatrix& a, const CoeffMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}

// ---- eval ----

struct EvalOpts {
    std::string input;
    std::string output;
    int samples = 100;
};

int run_eval(const EvalOpts& opts) {
    if (opts.samples < 2) return fail_usage("--samples must be at least 2");
    const SplineFile file = read_spline_file(opts.input);

    std::vector<std::string> header;
    header.push_back("t");
    header.insert(header.end(), file.labels.begin(), file.labels.end());

    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(opts.samples));
    const std::size_t n = static_cast<std::size_t>(opts.samples);
    if (file.mode == BoundaryMode::Periodic) {
        const PeriodicSpline s = to_periodic_spline(file);
        const double lo = file.knots.front();
        // One full period, endpoint excluded (it repeats the first row).
        for (std::size_t i = 0; i < n; ++i) {
            const double t =
                lo + s.period * static_cast<double>(i) / static_cast<double>(n);
            std::vector<double> row{t};
            const std::vector<double> v = eval_periodic(s, t);
            row.insert(row.end(), v.begin(), v.end());
            rows.push_back(std::move(row));
        }
    } else {
        const Spline s = to_spline(file);
        const double lo = file.knots.front();
        const double hi = file.knots.back();
        for (std::size_t i = 0; i < n; ++i) {
            const double t = (i + 1 == n)
                                 ? hi
                                 : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(n - 1);
            std::vector<double> row{t};
            const std::vector<double> v = eval_spline(s, t);
            row.insert(row.end(), v.begin(), v.end());
            rows.push_back(std::move(row));
        }
    }
    emit(opts.output, [&](std::ostream& out) { write_csv(out, header, rows); });
    return 0;
}

// ---- decompose ----

struct DecomposeOpts {
    std::string input;
    std::string output;
    int levels = 1;
    int order = 0; // 0: use the file's order
    int moments = 2;
    bool periodic = false;
    bool interval = false;
    bool verify = false;
};

// Walks the pyramid finest-to-coarsest, re-deriving every split with the
// dense oracle.  Returns true when every detail block and the base agree
// within kVerifyTol * max(1, input magnitude).
bool verify_multiscale(const MultiscaleDecomposition& decomp, const Spline& input) {
    const double tol = kVerifyTol * std::max(1.0, input.coeffs.max_abs());
    CoeffMatrix cur = input.coeffs;
    if (decomp.mode == BoundaryMode::WholeLine) {
        // The pyramid stores phantom-extended grids; embed the user rows at
        // the same offset the transform used.
        const auto pad_lo = static_cast<std::size_t>(decomp.params.ell1() - 1);
        const auto pad_hi = static_cast<std::size_t>(decomp.params.ell2() - 1);
        CoeffMatrix embedded(cur.rows() + pad_lo + pad_hi, cur.cols(), 0.0);
        for (std::size_t r = 0; r < cur.rows(); ++r)
            embedded.assign_row(r + pad_lo, cur, r);
        cur = std::move(embedded);
    }
    for (auto it = decomp.levels.rbegin(); it != decomp.levels.rend(); ++it) {
        const Spline s = make_spline(decomp.params.order, it->grids.fine.values(), cur);
        auto [oc, od] = oracle_decompose(s, it->grids);
        const double diff = matrix_max_diff(od, it->details);
        if (diff > tol) {
            std::cerr << "verification failed: detail block differs from the dense "
                         "oracle by "
                      << fmt(diff) << "\n";
            return false;
        }
        cur = std::move(oc);
    }
    const double base_diff = matrix_max_diff(cur, decomp.base_coeffs);
    if (base_diff > tol) {
        std::cerr << "verification failed: base coefficients differ from the dense "
                     "oracle by "
                  << fmt(base_diff) << "\n";
        return false;
    }
    return true;
}

bool verify_periodic(const PeriodicDecomposition& decomp, const PeriodicSpline& input) {
    const double tol = kVerifyTol * std::max(1.0, input.coeffs.max_abs());
    CoeffMatrix cur = input.coeffs;
    for (auto it = decomp.levels.rbegin(); it != decomp.levels.rend(); ++it) {
        const PeriodicSpline s = make_periodic_spline(
            decomp.params.order, it->grids.fine.values(), decomp.period, cur);
        auto [oc, od] = oracle_decompose(s, it->grids);
        const double diff = matrix_max_diff(od, it->details);
        if (diff > tol) {
            std::cerr << "verification failed: detail block differs from the dense "
                         "oracle by "
                      << fmt(diff) << "\n";
            return false;
        }
        cur = std::move(oc);
    }
    const double base_diff = matrix_max_diff(cur, decomp.base_coeffs);
    if (base_diff > tol) {
        std::cerr << "verification failed: base coefficients differ from the dense "
                     "oracle by "
                  << fmt(base_diff) << "\n";
        return false;
    }
    return true;
}

int run_decompose(const DecomposeOpts& opts) {
    if (opts.levels < 0) return fail_usage("--levels cannot be negative");
    if (opts.moments < 1) return fail_usage("--moments must be at least 1");
    if (opts.order < 0) return fail_usage("--order must be positive");
    const SplineFile file = read_spline_file(opts.input);
    std::string msg;
    if (!mode_flags_match(file.mode, opts.periodic, opts.interval, msg))
        return fail_usage(msg);
    if (opts.verify && file.knots.size() > kVerifyMaxKnots)
        return fail_usage("--verify supports at most 64 knots");

    const WaveletParams params{opts.order > 0 ? opts.order : file.order, opts.moments};
    bool ok = true;
    if (file.mode == BoundaryMode::Periodic) {
        const PeriodicSpline s = to_periodic_spline(file);
        const PeriodicDecomposition decomp = periodic_decompose(s, params, opts.levels);
        const DecompositionFile out = to_file(decomp, file.labels);
        emit(opts.output, [&](std::ostream& o) { write_decomposition_file(o, out); });
        if (opts.verify) ok = verify_periodic(decomp, s);
    } else {
        const Spline s = to_spline(file);
        const MultiscaleDecomposition decomp = decompose(s, params, file.mode, opts.levels);
        const DecompositionFile out = to_file(decomp, file.labels);
        emit(opts.output, [&](std::ostream& o) { write_decomposition_file(o, out); });
        if (opts.verify) ok = verify_multiscale(decomp, s);
    }
    if (!ok) return 3;
    if (opts.verify) std::cerr << "verification passed\n";
    return 0;
}

// ---- reconstruct ----

struct ReconstructOpts {
    std::string input;
    std::string output;
    bool periodic = false;
    bool interval = false;
};

int run_reconstruct(const ReconstructOpts& opts) {
    const DecompositionFile file = read_decomposition_file(opts.input);
    std::string msg;
    if (!mode_flags_match(file.mode, opts.periodic, opts.interval, msg))
        return fail_usage(msg);

    SplineFile out;
    if (file.mode == BoundaryMode::Periodic) {
        const PeriodicSpline s = periodic_reconstruct(periodic_from_file(file));
        out = from_periodic_spline(s, file.labels);
    } else {
        const Spline s = reconstruct(multiscale_from_file(file));
        out = from_spline(s, file.mode, file.labels);
    }
    emit(opts.output, [&](std::ostream& o) { write_spline_file(o, out); });
    return 0;
}

// ---- compress ----

struct CompressOpts {
    std::string input;
    std::string output;
    double epsilon = 1e-3;
    int passes = 1;
    int order = 0;
    int moments = 2;
    bool periodic = false;
    bool interval = false;
};

int run_compress(const CompressOpts& opts) {
    if (opts.epsilon < 0.0) return fail_usage("--epsilon cannot be negative");
    if (opts.passes < 0) return fail_usage("--passes cannot be negative");
    if (opts.moments < 1) return fail_usage("--moments must be at least 1");
    if (opts.order < 0) return fail_usage("--order must be positive");
    const SplineFile file = read_spline_file(opts.input);
    std::string msg;
    if (!mode_flags_match(file.mode, opts.periodic, opts.interval, msg))
        return fail_usage(msg);
    if (file.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic files cannot be compressed");

    const Spline s = to_spline(file);
    const WaveletParams params{opts.order > 0 ? opts.order : file.order, opts.moments};
    const CoarsenReport report = coarsen_repeated(s, params, file.mode, opts.epsilon,
                                                  opts.passes);

    // Measured deviation: sampled sup over the span.
    const double lo = file.knots.front();
    const double hi = file.knots.back();
    double deviation = 0.0;
    for (int i = 0; i <= kDeviationSamples; ++i) {
        const double t = (i == kDeviationSamples)
                             ? hi
                             : lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(kDeviationSamples);
        const std::vector<double> a = eval_spline(s, t);
        const std::vector<double> b = eval_spline(report.result, t);
        for (std::size_t c = 0; c < a.size(); ++c)
            deviation = std::max(deviation, std::abs(a[c] - b[c]));
    }

    std::cerr << "knots before: " << file.knots.size() << "\n";
    std::cerr << "knots after: " << report.result.knots.size() << "\n";
    std::cerr << "knots removed: " << report.removed_knots.size() << "\n";
    std::cerr << "passes: " << report.passes << "\n";
    std::cerr << "threshold: " << fmt(report.threshold) << "\n";
    std::cerr << "guaranteed bound: " << fmt(report.error_bound) << "\n";
    std::cerr << "measured deviation: " << fmt(deviation) << "\n";
    std::cerr << "knot histogram (" << kHistogramBins << " bins over [" << fmt(lo)
              << ", " << fmt(hi) << "]):\n";
    const auto& kept = report.result.knots.values();
    for (int b = 0; b < kHistogramBins; ++b) {
        const double ba = lo + (hi - lo) * b / kHistogramBins;
        const double bb = lo + (hi - lo) * (b + 1) / kHistogramBins;
        std::size_t count = 0;
        for (double v : kept)
            if ((v >= ba && v < bb) || (b + 1 == kHistogramBins && v == hi)) ++count;
        std::cerr << "  [" << fmt(ba) << ", " << fmt(bb)
                  << (b + 1 == kHistogramBins ? "]" : ")") << ": " << count << "\n";
    }

    const SplineFile out = from_spline(report.result, file.mode, file.labels);
    emit(opts.output, [&](std::ostream& o) { write_spline_file(o, out); });
    return 0;
}

// ---- refine ----

struct RefineOpts {
    std::string function;
    std::string output;
    double alpha = 2.5;
    double epsilon = 1e-3;
    int order = 4;
    int moments = 2;
    int samples = 1024;
    bool interval = false;
};

// Loads a two-column table (t, value), comma- or whitespace-separated, with
// an optional header line, and wraps it as a piecewise-linear function.
ScalarFunction load_sampled_function(const std::string& path, double& lo, double& hi) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<double> ts, ys;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t = 0.0, y = 0.0;
        if (!(ls >> t)) {
            if (lineno == 1 || line.find_first_not_of(" \t\r") == std::string::npos)
                continue; // header or blank line
            throw ParseError("sample line " + std::to_string(lineno) +
                             " is not numeric");
        }
        if (!(ls >> y))
            throw ParseError("sample line " + std::to_string(lineno) +
                             " needs two columns");
        if (!ts.empty() && t <= ts.back())
            throw ParseError("sample abscissae must increase strictly (line " +
                             std::to_string(lineno) + ")");
        ts.push_back(t);
        ys.push_back(y);
    }
    if (ts.size() < 2) throw ParseError("sample file needs at least two rows");
    lo = ts.front();
    hi = ts.back();
    return [ts = std::move(ts), ys = std::move(ys)](double t) {
        if (t <= ts.front()) return ys.front();
        if (t >= ts.back()) return ys.back();
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - ts.begin());
        const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
        return ys[i - 1] + w * (ys[i] - ys[i - 1]);
    };
}

int run_refine(const RefineOpts& opts) {
    if (opts.alpha <= 1.0) return fail_usage("--alpha must exceed 1");
    if (!(opts.epsilon > 0.0)) return fail_usage("--epsilon must be positive");
    if (opts.order < 2) return fail_usage("--order must be at least 2");
    if (opts.moments < 1) return fail_usage("--moments must be at least 1");
    if (opts.samples < 2) return fail_usage("--samples must be at least 2");

    ScalarFunction f;
    double lo = 0.0, hi = 1.0;
    if (opts.function == "tanh-step") {
        f = [](double t) { return std::tanh(100.0 * (t - 0.5)); };
    } else if (opts.function == "sine") {
        f = [](double t) { return std::sin(2.0 * kPi * t); };
    } else if (opts.function == "sawtooth-smooth") {
        f = [](double t) {
            double acc = 0.0;
            for (int k = 1; k <= 8; ++k)
                acc += (k % 2 == 1 ? 1.0 : -1.0) * std::sin(2.0 * kPi * k * t) / k;
            return (2.0 / kPi) * acc;
        };
    } else {
        f = load_sampled_function(opts.function, lo, hi);
    }

    // Initial grid: 17 uniform break points over the target domain.
    std::vector<double> breaks(17);
    for (std::size_t i = 0; i < breaks.size(); ++i)
        breaks[i] = lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(breaks.size() - 1);
    const KnotSequence grid(interval_knots(opts.order, breaks));

    RefineConfig config;
    config.alpha = opts.alpha;
    config.epsilon = opts.epsilon;
    config.max_iters = kMaxRefineIters;
    config.sample_points = static_cast<std::size_t>(opts.samples);

    const WaveletParams params{opts.order, opts.moments};
    const RefineResult result =
        refine_loop(f, interpolation_method(opts.order), grid, params, config);

    for (std::size_t i = 0; i < result.history.size(); ++i) {
        const RefineRecord& rec = result.history[i];
        std::cerr << "iteration " << i << ": knots " << rec.grid_size << "  change ";
        if (std::isfinite(rec.change))
            std::cerr << fmt(rec.change);
        else
            std::cerr << "-";
        std::cerr << "  sup-error " << fmt(rec.sup_error) << "\n";
    }

    const SplineFile out = from_spline(result.approximation, BoundaryMode::Interval);
    emit(opts.output, [&](std::ostream& o) { write_spline_file(o, out); });

    if (!result.converged) {
        std::cerr << "did not converge within " << result.iterations
                  << " iterations; best approximation written\n";
        return 3;
    }
    std::cerr << "converged after " << result.iterations << " iterations\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast spline wavelet transforms on nonuniform knot grids"};
    app.require_subcommand(1);

    EvalOpts eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "sample a spline file to CSV");
    eval->add_option("input", eval_opts.input, "spline file")->required();
    eval->add_option("--samples", eval_opts.samples, "number of sample rows");
    eval->add_option("--output", eval_opts.output, "output path (default: stdout)");

    DecomposeOpts dec_opts;
    CLI::App* dec = app.add_subcommand("decompose", "multiscale analysis of a spline file");
    dec->add_option("input", dec_opts.input, "spline file")->required();
    dec->add_option("--levels", dec_opts.levels, "number of transitions");
    dec->add_option("--order", dec_opts.order, "transform order (default: the file's)");
    dec->add_option("--moments", dec_opts.moments, "vanishing moments (dual order)");
    dec->add_flag("--periodic", dec_opts.periodic, "assert the file is periodic");
    dec->add_flag("--interval", dec_opts.interval, "assert the file is an interval grid");
    dec->add_flag("--verify", dec_opts.verify, "cross-check against the dense oracle");
    dec->add_option("--output", dec_opts.output, "output path (default: stdout)");

    ReconstructOpts rec_opts;
    CLI::App* rec = app.add_subcommand("reconstruct", "synthesis from a decomposition file");
    rec->add_option("input", rec_opts.input, "decomposition file")->required();
    rec->add_flag("--periodic", rec_opts.periodic, "assert the file is periodic");
    rec->add_flag("--interval", rec_opts.interval, "assert the file is an interval grid");
    rec->add_option("--output", rec_opts.output, "output path (default: stdout)");

    CompressOpts cmp_opts;
    CLI::App* cmp = app.add_subcommand("compress", "threshold-coarsen a spline file");
    cmp->add_option("input", cmp_opts.input, "spline file")->required();
    cmp->add_option("--epsilon", cmp_opts.epsilon, "detail threshold");
    cmp->add_option("--passes", cmp_opts.passes, "maximum coarsening passes");
    cmp->add_option("--order", cmp_opts.order, "transform order (default: the file's)");
    cmp->add_option("--moments", cmp_opts.moments, "vanishing moments (dual order)");
    cmp->add_flag("--periodic", cmp_opts.periodic, "assert the file is periodic");
    cmp->add_flag("--interval", cmp_opts.interval, "assert the file is an interval grid");
    cmp->add_option("--output", cmp_opts.output, "output path (default: stdout)");

    RefineOpts ref_opts;
    CLI::App* ref = app.add_subcommand("refine", "adaptively approximate a function");
    ref->add_option("--function", ref_opts.function,
                    "tanh-step | sine | sawtooth-smooth | path to a 2-column sample table")
        ->required();
    ref->add_option("--alpha", ref_opts.alpha, "refinement rate (must exceed 1)");
    ref->add_option("--epsilon", ref_opts.epsilon, "target sup-norm tolerance");
    ref->add_option("--order", ref_opts.order, "spline order");
    ref->add_option("--moments", ref_opts.moments, "vanishing moments (dual order)");
    ref->add_option("--samples", ref_opts.samples, "points for the change norm");
    ref->add_flag("--interval", ref_opts.interval, "assert interval boundaries (always true)");
    ref->add_option("--output", ref_opts.output, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (eval->parsed()) return run_eval(eval_opts);
        if (dec->parsed()) return run_decompose(dec_opts);
        if (rec->parsed()) return run_reconstruct(rec_opts);
        if (cmp->parsed()) return run_compress(cmp_opts);
        if (ref->parsed()) return run_refine(ref_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
