#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "snlab/weights.hpp"

using snlab::weights::Knot;
using snlab::weights::WeightFunction;
using snlab::weights::validate_class_q;

namespace {
constexpr double kE = 2.718281828459045235360287471352662498;
}

TEST_CASE("power and constant evaluate to hand values") {
    CHECK(WeightFunction::power(0.5).eval(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(WeightFunction::constant(1.0).eval(0.3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sqrtloglog applies the guarded double log") {
    // t = e^{-e^2}: log(1/t) = e^2, loglog(1/t) = 2
    const double t = std::exp(-kE * kE);
    const double expect = std::sqrt(2.0 * t);
    CHECK(WeightFunction::sqrt_log_log(1.0).eval(t) == doctest::Approx(expect).epsilon(1e-14));

    // inside the clamp both logs collapse to 1, so q = sqrt(a t)
    for (double tt : {0.5, 0.9, 1.0, 1.0 / kE}) {
        CHECK(WeightFunction::sqrt_log_log(3.0).eval(tt) ==
              doctest::Approx(std::sqrt(3.0 * tt)).epsilon(1e-14));
    }
}

TEST_CASE("evaluation domain is (0,1]") {
    const auto w = WeightFunction::power(0.5);
    CHECK_THROWS_AS(w.eval(0.0), std::domain_error);
    CHECK_THROWS_AS(w.eval(-0.1), std::domain_error);
    CHECK_THROWS_AS(w.eval(1.0000001), std::domain_error);
    CHECK_NOTHROW(w.eval(1.0));
}

TEST_CASE("bad family parameters are rejected at construction") {
    CHECK_THROWS_AS(WeightFunction::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::power(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::sqrt_log(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::sqrt_log_log(0.0), std::invalid_argument);
}

TEST_CASE("built-in families are nondecreasing below their monotone delta") {
    const std::vector<WeightFunction> ws = {
        WeightFunction::power(0.4),    WeightFunction::power(2.0),
        WeightFunction::sqrt_log(1.0), WeightFunction::sqrt_log_log(1.0),
        WeightFunction::constant(2.5), WeightFunction::sqrt_log(0.3),
    };
    for (const auto& w : ws) {
        const double delta = w.monotone_delta();
        double prev = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = delta * std::exp(-30.0 * (1.0 - i / 400.0));
            const double q = w.eval(t);
            CHECK(q >= prev * (1.0 - 1e-13));
            prev = q;
        }
    }
}

TEST_CASE("power family scales multiplicatively in t") {
    const auto w = WeightFunction::power(0.7);
    for (double s : {0.03, 0.2, 0.9}) {
        for (double t : {0.01, 0.37, 1.0}) {
            const double lhs = w.eval(s * t);
            const double rhs = std::pow(s, 0.7) * w.eval(t);
            CHECK(lhs == doctest::Approx(rhs).epsilon(2e-15));
        }
    }
}

TEST_CASE("scaled weight multiplies evaluations exactly") {
    const auto base = WeightFunction::sqrt_log_log(1.0);
    const auto twice = base.scaled(2.0);
    for (double t : {1e-9, 1e-3, 0.5, 1.0}) {
        CHECK(twice.eval(t) == 2.0 * base.eval(t));
        CHECK(twice.squared_over_t(t) == 4.0 * base.squared_over_t(t));
    }
    CHECK_THROWS_AS(base.scaled(0.0), std::invalid_argument);
}

TEST_CASE("validate_class_q: power weight passes and reports the sqrt ratio") {
    const auto rep = validate_class_q(WeightFunction::power(0.4), 1000);
    CHECK(rep.passed());
    REQUIRE(!rep.sqrt_t_over_q_head.empty());
    // t^{1/2}/t^{0.4} = t^{0.1} at t = 1e-12
    const auto& [t0, ratio0] = rep.sqrt_t_over_q_head.front();
    CHECK(t0 == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(ratio0 == doctest::Approx(std::pow(1e-12, 0.1)).epsilon(1e-10));
}

TEST_CASE("validate_class_q: constant weight ratio goes to zero") {
    const auto rep = validate_class_q(WeightFunction::constant(1.0), 10);
    CHECK(rep.passed());
    CHECK(rep.sqrt_t_over_q_head.front().second < 1e-5);
}

TEST_CASE("validate_class_q: custom knot violating monotonicity is reported") {
    // q drops between two knots below delta
    const auto w = WeightFunction::custom(
        {Knot{1e-8, 1.0}, Knot{1e-4, 0.25}, Knot{1e-1, 0.5}, Knot{1.0, 1.0}}, 0.05);
    const auto rep = validate_class_q(w, 500);
    CHECK(!rep.monotone);
    CHECK(!rep.passed());
    CHECK(!rep.violations.empty());
}

TEST_CASE("validate_class_q rejects tiny grids") {
    CHECK_THROWS_AS(validate_class_q(WeightFunction::constant(1.0), 1), std::domain_error);
}

TEST_CASE("custom weights interpolate log-linearly and clamp outside the knots") {
    const auto w = WeightFunction::custom({Knot{0.01, 0.1}, Knot{1.0, 1.0}}, 1.0);
    CHECK(w.eval(0.001) == doctest::Approx(0.1));  // clamps to the left knot
    CHECK(w.eval(0.01) == doctest::Approx(0.1));
    CHECK(w.eval(1.0) == doctest::Approx(1.0));
    // halfway in log t between the knots -> halfway in log q
    CHECK(w.eval(0.1) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
}

TEST_CASE("weight specs parse") {
    CHECK(WeightFunction::parse("power:0.4").id() == "power:0.4");
    CHECK(WeightFunction::parse("sqrtloglog:1").eval(0.8) ==
          doctest::Approx(std::sqrt(0.8)).epsilon(1e-14));
    CHECK(WeightFunction::parse("const:2").eval(0.3) == doctest::Approx(2.0));
    CHECK_THROWS_AS(WeightFunction::parse("gaussian:1"), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::parse("power"), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::parse("power:abc"), std::invalid_argument);
}
