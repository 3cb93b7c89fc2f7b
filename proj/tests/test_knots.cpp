#include "doctest.h"

#include <vector>

#include "splinewave/errors.hpp"
#include "splinewave/knots.hpp"

using namespace splinewave;

TEST_CASE("find_interval uses half-open cells closed at the global minimum") {
    KnotSequence k(std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(k.find_interval(0.5) == 0);
    CHECK(k.find_interval(1.0) == 0); // knot belongs to the cell left of it
    CHECK(k.find_interval(1.5) == 1);
    CHECK(k.find_interval(3.0) == 2);
    CHECK(k.find_interval(0.0) == 0); // minimum folds into the first cell
    CHECK_THROWS_AS(k.find_interval(-0.1), OutOfSupport);
    CHECK_THROWS_AS(k.find_interval(3.1), OutOfSupport);
}

TEST_CASE("find_interval skips empty leading cells at a repeated minimum") {
    KnotSequence k(std::vector<double>{0.0, 0.0, 0.0, 1.0, 2.0, 2.0, 2.0});
    CHECK(k.find_interval(0.0) == 2); // first nonempty cell
    CHECK(k.find_interval(0.5) == 2);
    CHECK(k.find_interval(1.0) == 2);
    CHECK(k.find_interval(2.0) == 3);
}

TEST_CASE("validate_knots enforces monotonicity and multiplicity caps") {
    CHECK_NOTHROW(validate_knots(KnotSequence({0.0, 1.0, 2.0, 3.0}), 2));
    CHECK_THROWS_AS(validate_knots(KnotSequence({0.0, 2.0, 1.0}), 2), DecreasingKnots);
    // interior multiplicity up to order-1 is allowed, order is not
    CHECK_NOTHROW(validate_knots(KnotSequence({0.0, 1.0, 1.0, 2.0, 3.0}), 3));
    CHECK_THROWS_AS(validate_knots(KnotSequence({0.0, 1.0, 1.0, 1.0, 2.0}), 3),
                    ExcessMultiplicity);
    // boundary multiplicity up to order is allowed, more is not
    CHECK_NOTHROW(validate_knots(KnotSequence({0.0, 0.0, 0.0, 1.0, 2.0, 2.0, 2.0}), 3));
    CHECK_THROWS_AS(validate_knots(KnotSequence({0.0, 0.0, 0.0, 0.0, 1.0, 2.0}), 3),
                    ExcessMultiplicity);
}

TEST_CASE("is_refinement is multiset containment") {
    KnotSequence coarse({0.0, 1.0, 2.0, 3.0});
    CHECK(is_refinement(coarse, KnotSequence({0.0, 0.5, 1.0, 2.0, 3.0})));
    CHECK(is_refinement(coarse, coarse));
    CHECK_FALSE(is_refinement(coarse, KnotSequence({0.0, 0.5, 2.0, 3.0})));
    // multiplicity counts: one stored copy does not cover two required ones
    KnotSequence dup({0.0, 1.0, 1.0, 3.0});
    CHECK_FALSE(is_refinement(dup, KnotSequence({0.0, 1.0, 2.0, 3.0})));
    CHECK(is_refinement(dup, KnotSequence({0.0, 1.0, 1.0, 2.0, 3.0})));
}

TEST_CASE("extend view continues the grid with the end spacings") {
    KnotSequence k(std::vector<double>{0.0, 1.0, 3.0});
    KnotView v(k, KnotView::Mode::Extend);
    CHECK(v(0) == 0.0);
    CHECK(v(2) == 3.0);
    CHECK(v(-1) == doctest::Approx(-1.0));
    CHECK(v(-2) == doctest::Approx(-2.0));
    CHECK(v(3) == doctest::Approx(5.0));
    CHECK(v(4) == doctest::Approx(7.0));
}

TEST_CASE("extend view falls back to the total span at a degenerate end") {
    KnotSequence k(std::vector<double>{0.0, 0.0, 1.0, 2.0, 2.0});
    KnotView v(k, KnotView::Mode::Extend);
    CHECK(v(-1) == doctest::Approx(-2.0)); // span fallback, end gap is zero
    CHECK(v(5) == doctest::Approx(4.0));
}

TEST_CASE("periodic view shifts by whole periods") {
    const std::vector<double> base{0.0, 0.5, 1.5};
    KnotView v(base, KnotView::Mode::Periodic, 2.0);
    CHECK(v(0) == 0.0);
    CHECK(v(3) == doctest::Approx(2.0));
    CHECK(v(4) == doctest::Approx(2.5));
    CHECK(v(7) == doctest::Approx(4.5));
    CHECK(v(-1) == doctest::Approx(-0.5));
    CHECK(v(-3) == doctest::Approx(-2.0));
}

TEST_CASE("periodic index map splits into base index and wrap count") {
    auto w = periodic_index_map(5, 3);
    CHECK(w.base == 2);
    CHECK(w.wraps == 1);
    w = periodic_index_map(-1, 3);
    CHECK(w.base == 2);
    CHECK(w.wraps == -1);
    w = periodic_index_map(0, 3);
    CHECK(w.base == 0);
    CHECK(w.wraps == 0);
    w = periodic_index_map(6, 3);
    CHECK(w.base == 0);
    CHECK(w.wraps == 2);
    w = periodic_index_map(-3, 3);
    CHECK(w.base == 0);
    CHECK(w.wraps == -1);
}
