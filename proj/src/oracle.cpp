#include "splinewave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "splinewave/errors.hpp"
#include "splinewave/transform.hpp"

namespace splinewave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Chebyshev-distributed interior points of (a, b).  Strictly interior, so
// they never collide with knots and never probe the half-open cell seams.
void chebyshev_points(double a, double b, std::size_t count, std::vector<double>& out) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(mid + half * std::cos((2.0 * static_cast<double>(i) + 1.0) * kPi /
                                            (2.0 * static_cast<double>(count))));
    }
}

struct DenseSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

// Solves the sampled change-of-basis system and splits the solution into
// (coarse, details).  Shared by both oracle_decompose overloads.
std::pair<CoeffMatrix, CoeffMatrix> solve_split(const DenseSystem& sys,
                                                std::size_t nbc,
                                                std::size_t nwav,
                                                double scale) {
    const auto cols = static_cast<std::size_t>(sys.A.cols());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.A);
    if (static_cast<std::size_t>(qr.rank()) < cols)
        throw RankDeficient("sampled basis matrix lost rank");
    Eigen::MatrixXd x = qr.solve(sys.B);
    const double residual = (sys.A * x - sys.B).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, scale))
        throw RankDeficient("spline is not representable in the sampled basis");

    const auto nch = static_cast<std::size_t>(sys.B.cols());
    CoeffMatrix coarse(nbc, nch);
    CoeffMatrix details(nwav, nch);
    for (std::size_t c = 0; c < nch; ++c) {
        for (std::size_t r = 0; r < nbc; ++r)
            coarse(r, c) = x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        for (std::size_t r = 0; r < nwav; ++r)
            details(r, c) = x(static_cast<Eigen::Index>(nbc + r), static_cast<Eigen::Index>(c));
    }
    return {std::move(coarse), std::move(details)};
}

std::size_t points_per_cell(std::size_t cols, std::size_t cells) {
    // At least four points per cell, and at least twice as many rows as
    // columns overall, whichever asks for more.
    const std::size_t need = (2 * cols + cells - 1) / cells;
    return std::max<std::size_t>(4, need);
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidConfig("quadrature rule needs at least one node");
    std::vector<double> x(n), w(n);
    const auto ni = static_cast<unsigned>(n);
    // Each root is bracketed near the Chebyshev angle estimate; Newton on
    // the Legendre polynomial converges in a handful of steps from there.
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double p = std::legendre(ni, t);
            const double pm = std::legendre(ni - 1, t);
            // Derivative from the standard recurrence; t is strictly inside
            // (-1, 1) for every root, so the denominator cannot vanish.
            dp = static_cast<double>(n) * (t * p - pm) / (t * t - 1.0);
            const double step = p / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        // One clean-up evaluation so the weight uses the converged node.
        const double p = std::legendre(ni, t);
        const double pm = std::legendre(ni - 1, t);
        dp = static_cast<double>(n) * (t * p - pm) / (t * t - 1.0);
        const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;        // ascending order: the angle estimate starts at the top
        w[i] = weight;
        x[n - 1 - i] = t;
        w[n - 1 - i] = weight;
    }
    return {std::move(x), std::move(w)};
}

double moment_quadrature(const LevelGrids& level, std::size_t k, int ell) {
    if (ell < 0) throw InvalidConfig("moment exponent cannot be negative");
    if (k >= level.slots.size()) throw IndexOutOfRange("wavelet index out of range");
    const WaveletSlot& slot = level.slots[k];
    const int order = level.params.order;

    // Per cell the integrand is a polynomial of degree (order - 1) + ell;
    // g Gauss nodes are exact through degree 2g - 1.
    const auto degree = static_cast<std::size_t>(order - 1 + ell);
    const std::size_t g = degree / 2 + 1;
    auto [nodes, weights] = gauss_legendre(g);

    const Spline w = make_spline(order, slot.xi, slot.xi_coeffs);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < slot.xi.size(); ++i) {
        const double a = slot.xi[i];
        const double b = slot.xi[i + 1];
        if (!(b > a)) continue;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t q = 0; q < g; ++q) {
            const double t = mid + half * nodes[q];
            acc += half * weights[q] * eval_spline(w, t)[0] * std::pow(t, ell);
        }
    }
    return acc;
}

std::pair<CoeffMatrix, CoeffMatrix> oracle_decompose(const Spline& s,
                                                     const LevelGrids& level) {
    if (level.mode == BoundaryMode::Periodic)
        throw GridMismatch("periodic transforms have separate entry points");
    if (s.order != level.params.order)
        throw GridMismatch("spline order does not match the transform order");
    if (s.knots.values() != level.fine.values())
        throw GridMismatch("spline does not live on the level's fine grid");
    if (level.coarse.values().front() != level.fine.values().front() ||
        level.coarse.values().back() != level.fine.values().back())
        throw GridMismatch("the coarse span must cover the fine span");

    const std::size_t nbc = level.coarse.num_basis(s.order);
    const std::size_t nwav = level.num_wavelets();
    const std::size_t cols = nbc + nwav;
    const std::size_t nch = s.channels();

    // Sample points: a batch of interior Chebyshev points per nonempty fine
    // cell.  Nonempty cells tile the support, so the samples see everything.
    std::vector<std::pair<double, double>> cells;
    for (std::size_t i = 0; i + 1 < level.fine.size(); ++i)
        if (level.fine[i + 1] > level.fine[i])
            cells.emplace_back(level.fine[i], level.fine[i + 1]);
    const std::size_t ppc = points_per_cell(cols, cells.size());
    std::vector<double> pts;
    pts.reserve(cells.size() * ppc);
    for (const auto& [a, b] : cells) chebyshev_points(a, b, ppc, pts);

    // Coarse basis values come from an identity-coefficient spline: channel
    // j of that spline is exactly coarse basis function j.
    CoeffMatrix ident(nbc, nbc);
    for (std::size_t j = 0; j < nbc; ++j) ident(j, j) = 1.0;
    const Spline basis = make_spline(s.order, level.coarse.values(), ident);

    DenseSystem sys;
    sys.A.setZero(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(cols));
    sys.B.setZero(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(nch));
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const double t = pts[r];
        const std::vector<double> bv = eval_spline(basis, t);
        for (std::size_t j = 0; j < nbc; ++j)
            sys.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = bv[j];
        for (std::size_t j = 0; j < nwav; ++j)
            sys.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(nbc + j)) =
                eval_wavelet(level, j, t);
        const std::vector<double> sv = eval_spline(s, t);
        for (std::size_t c = 0; c < nch; ++c)
            sys.B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sv[c];
    }
    return solve_split(sys, nbc, nwav, s.coeffs.max_abs());
}

std::pair<CoeffMatrix, CoeffMatrix> oracle_decompose(const PeriodicSpline& s,
                                                     const LevelGrids& level) {
    if (level.mode != BoundaryMode::Periodic)
        throw GridMismatch("this entry point is for periodic levels");
    if (s.order != level.params.order)
        throw GridMismatch("spline order does not match the transform order");
    if (s.knots.values() != level.fine.values() || s.period != level.period)
        throw GridMismatch("spline does not live on the level's fine grid");

    const std::size_t nbc = level.coarse.size();   // periodic basis count
    const std::size_t nwav = level.num_wavelets();
    const std::size_t cols = nbc + nwav;
    const std::size_t nch = s.channels();

    // One period of cells, including the wrap-around cell back to the first
    // knot shifted by the period.
    const std::size_t n1 = level.fine.size();
    std::vector<std::pair<double, double>> cells;
    for (std::size_t i = 0; i < n1; ++i) {
        const double a = level.fine[i];
        const double b = (i + 1 < n1) ? level.fine[i + 1] : level.fine[0] + level.period;
        if (b > a) cells.emplace_back(a, b);
    }
    const std::size_t ppc = points_per_cell(cols, cells.size());
    std::vector<double> pts;
    pts.reserve(cells.size() * ppc);
    for (const auto& [a, b] : cells) chebyshev_points(a, b, ppc, pts);

    CoeffMatrix ident(nbc, nbc);
    for (std::size_t j = 0; j < nbc; ++j) ident(j, j) = 1.0;
    const PeriodicSpline basis =
        make_periodic_spline(s.order, level.coarse.values(), level.period, ident);

    DenseSystem sys;
    sys.A.setZero(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(cols));
    sys.B.setZero(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(nch));
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const double t = pts[r];
        const std::vector<double> bv = eval_periodic(basis, t);
        for (std::size_t j = 0; j < nbc; ++j)
            sys.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = bv[j];
        for (std::size_t j = 0; j < nwav; ++j)
            sys.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(nbc + j)) =
                eval_wavelet(level, j, t);
        const std::vector<double> sv = eval_periodic(s, t);
        for (std::size_t c = 0; c < nch; ++c)
            sys.B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sv[c];
    }
    return solve_split(sys, nbc, nwav, s.coeffs.max_abs());
}

std::vector<double> uniform_filter_extract(const WaveletParams& params, std::size_t n) {
    if ((params.order + params.dual_order) % 2 != 0)
        throw InvalidConfig("uniform specialization needs an even order sum");
    if (n < 3) throw GridTooSmall("uniform extraction needs at least three knots");
    if (n % 2 == 0)
        throw InvalidConfig("uniform extraction needs an odd knot count so halving keeps the spacing uniform");

    std::vector<double> fine(n);
    for (std::size_t i = 0; i < n; ++i) fine[i] = static_cast<double>(i);
    std::vector<double> coarse = dyadic_coarsen_knots(fine, BoundaryMode::WholeLine, params.order);

    // Same phantom treatment as the whole-line pyramid: extend the fine grid
    // by continued end spacing and splice the identical phantoms onto the
    // coarse grid, so every construction window has real rows to land on.
    const int pad_lo = params.ell1() - 1;
    const int pad_hi = params.ell2() - 1;
    const std::vector<double> ext_fine = phantom_extension(fine, pad_lo, pad_hi);
    std::vector<double> ext_coarse(ext_fine.begin(), ext_fine.begin() + pad_lo);
    ext_coarse.insert(ext_coarse.end(), coarse.begin(), coarse.end());
    ext_coarse.insert(ext_coarse.end(), ext_fine.end() - pad_hi, ext_fine.end());

    const LevelGrids level = build_level(params, BoundaryMode::WholeLine,
                                         KnotSequence(ext_coarse), KnotSequence(ext_fine));

    // On the bi-infinite uniform grid every window is a translate of one
    // stencil.  A finite grid can only emulate that away from its ends: the
    // outermost slot on each side reads phantom knots (whose spacing follows
    // the fine grid, not the coarse one) and is genuinely boundary-adapted.
    // A slot is an interior one exactly when its support stays inside the
    // original span, which the slot's own knot vector records.
    const double span_lo = fine.front();
    const double span_hi = fine.back();
    std::vector<const WaveletSlot*> interior;
    for (const WaveletSlot& slot : level.slots)
        if (slot.xi.front() >= span_lo && slot.xi.back() <= span_hi)
            interior.push_back(&slot);
    if (interior.empty())
        throw GridTooSmall("grid too short to contain an interior window");

    const WaveletSlot& first = *interior.front();
    const std::ptrdiff_t align0 = first.b_offset - first.new_fine_index;
    for (const WaveletSlot* sp : interior) {
        const WaveletSlot& slot = *sp;
        if (slot.b.size() != first.b.size() ||
            slot.b_offset - slot.new_fine_index != align0)
            throw NotTranslationInvariant("uniform grid produced shifting windows");
        for (std::size_t i = 0; i < first.b.size(); ++i)
            if (std::abs(slot.b[i] - first.b[i]) > 1e-12)
                throw NotTranslationInvariant("uniform grid produced unequal windows");
    }
    return first.b;
}

} // namespace splinewave
