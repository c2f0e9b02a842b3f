#include <doctest.h>

#include <stdexcept>

#include <vector>

#include "snlab/empirical.hpp"
#include "snlab/rng.hpp"

using snlab::stats::EmpiricalDistribution;
using snlab::stats::ks_distance;
using snlab::stats::Meta;

namespace {
EmpiricalDistribution make(std::vector<double> v) {
    return EmpiricalDistribution(std::move(v), Meta{});
}
}  // namespace

TEST_CASE("ks distance on enumerated cases") {
    CHECK(ks_distance(make({1, 2, 3}), make({1, 2, 3})) == 0.0);
    CHECK(ks_distance(make({1, 2}), make({1.5, 2.5})) == doctest::Approx(0.5));
    CHECK(ks_distance(make({0}), make({1})) == doctest::Approx(1.0));
}

TEST_CASE("ks distance is symmetric and bounded") {
    snlab::rng::Rng gen(7);
    std::vector<double> a, b;
    for (int i = 0; i < 257; ++i) a.push_back(gen.normal());
    for (int i = 0; i < 101; ++i) b.push_back(0.3 + 0.5 * gen.normal());
    const auto da = make(a);
    const auto db = make(b);
    const double d1 = ks_distance(da, db);
    const double d2 = ks_distance(db, da);
    CHECK(d1 == d2);
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 1.0);
}

TEST_CASE("ks handles ties across samples") {
    CHECK(ks_distance(make({1, 1, 2}), make({1, 2, 2})) == doctest::Approx(1.0 / 3));
}

TEST_CASE("empirical distribution orders, quantiles, ecdf") {
    const auto d = make({3.0, 1.0, 2.0, 4.0});
    CHECK(d.values().front() == 1.0);
    CHECK(d.values().back() == 4.0);
    CHECK(d.quantile(0.0) == 1.0);
    CHECK(d.quantile(1.0) == 4.0);
    CHECK(d.median() == doctest::Approx(2.5));
    CHECK(d.ecdf(0.5) == 0.0);
    CHECK(d.ecdf(1.0) == doctest::Approx(0.25));  // right-continuous jump at 1
    CHECK(d.ecdf(3.9) == doctest::Approx(0.75));
    CHECK(d.ecdf(4.0) == 1.0);
    CHECK(d.tail_fraction_above(2.0) == doctest::Approx(0.5));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(make({}), std::invalid_argument);
    CHECK_THROWS_AS(make({0.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(make({1.0}).quantile(1.5), std::domain_error);
    CHECK_THROWS_AS(ks_distance(std::span<const double>{}, std::span<const double>{}),
                    std::invalid_argument);
}

TEST_CASE("meta compatibility gates weight and functional") {
    Meta a;
    a.weight = "const:1";
    a.functional = "sup";
    Meta b = a;
    CHECK(a.compatible_with(b));
    b.functional = "lp:1";
    CHECK(!a.compatible_with(b));
}
