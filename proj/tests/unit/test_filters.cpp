#include "shellfh/filters.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace shellfh;

TEST_CASE("exp filter plateau and support are bit-exact") {
    CHECK(exp_filter(0.0) == 1.0);
    CHECK(exp_filter(0.5) == 1.0);
    CHECK(exp_filter(1.0) == 1.0);
    CHECK(exp_filter(2.0) == 0.0);
    CHECK(exp_filter(2.5) == 0.0);
    CHECK(exp_filter(1e9) == 0.0);
    CHECK_THROWS_AS((void)exp_filter(-0.1), std::domain_error);
}

TEST_CASE("exp filter interior value") {
    // exp(-2 exp(2/(1-1.5)) / (2-1.5)) = exp(-4 e^-4), frozen from a
    // high-precision evaluation.
    CHECK(exp_filter(1.5) == doctest::Approx(0.92935679020240320).epsilon(1e-13));
}

TEST_CASE("exp filter is monotone non-increasing on [1, 2]") {
    double prev = exp_filter(1.0);
    for (int i = 1; i <= 1000; ++i) {
        const double x = 1.0 + i / 1000.0;
        const double v = exp_filter(x);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("exp filter joins are numerically smooth") {
    // C-infinity is not finitely testable; bound the first and second
    // finite differences across both joins instead.
    const double h = 1e-4;
    for (double x0 : {1.0, 2.0}) {
        const double d1 = (exp_filter(x0 + h) - exp_filter(x0 - h)) / (2.0 * h);
        const double d2 =
            (exp_filter(x0 + h) - 2.0 * exp_filter(x0) + exp_filter(x0 - h)) / (h * h);
        CHECK(std::abs(d1) < 1e-3);
        CHECK(std::abs(d2) < 1e-3);
    }
    for (double delta : {1e-2, 1e-4, 1e-6}) {
        CHECK(std::abs(exp_filter(1.0 + delta) - 1.0) < 1e-1 * delta + 1e-9);
        CHECK(std::abs(exp_filter(2.0 - delta)) < 1e-9);
    }
}

TEST_CASE("indicator filter") {
    CHECK(indicator_filter(0.0) == 1.0);
    CHECK(indicator_filter(1.0) == 1.0);
    CHECK(indicator_filter(1.0001) == 0.0);
    CHECK_THROWS_AS((void)indicator_filter(-1.0), std::domain_error);
}

TEST_CASE("product filter") {
    const FilterPair pair = FilterPair::make("exp", 2.0, "exp", 2.0);
    CHECK(pair.product(0.2, 0.9) == 1.0);
    CHECK(pair.product(1.5, 0.5) ==
          doctest::Approx(0.92935679020240320).epsilon(1e-13));
    CHECK(pair.product(0.5, 3.0) == 0.0);
    CHECK(pair.a() == 2.0);
    CHECK(pair.b() == 2.0);
}

TEST_CASE("filter pair construction rules") {
    CHECK_NOTHROW(FilterPair::make("indicator", 1.5, "indicator", 2.0));
    CHECK_NOTHROW(FilterPair::make("exp", 2.0, "indicator", 1.1));
    CHECK_THROWS_AS(FilterPair::make("exp", 1.5, "exp", 2.0), std::invalid_argument);
    CHECK_THROWS_AS(FilterPair::make("cosine", 2.0, "exp", 2.0), std::invalid_argument);
    CHECK_THROWS_AS(FilterPair::make("exp", 2.0, "exp", 2.5), std::invalid_argument);
    CHECK_THROWS_AS(FilterPair::make("exp", 2.0, "exp", 1.0), std::invalid_argument);
}
