#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "snlab/dan_models.hpp"
#include "snlab/quadrature.hpp"
#include "snlab/rng.hpp"

using snlab::models::DistributionModel;
using snlab::rng::Rng;

namespace {

// Independent oracle for l(x) of the standard normal: composite quadrature
// of t^2 phi(t) over [0,x], doubled by symmetry.
double normal_l_oracle(double x) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
    const int panels = 64;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = x * i / panels, b = x * (i + 1) / panels;
        acc += snlab::quadrature::gl32(a, b, [](double t) {
            return t * t * kInvSqrt2Pi * std::exp(-0.5 * t * t);
        });
    }
    return 2.0 * acc;
}

}  // namespace

TEST_CASE("rademacher support, truncated moment, norming") {
    const auto m = DistributionModel::rademacher();
    Rng gen(11);
    for (int i = 0; i < 50; ++i) {
        const double x = m.sample_one(gen);
        CHECK((x == 1.0 || x == -1.0));
    }
    CHECK(m.truncated_second_moment(0.5) == 0.0);
    CHECK(m.truncated_second_moment(1.0) == 1.0);
    CHECK(m.truncated_second_moment(7.0) == 1.0);

    CHECK(m.eta(1) == 2.0);  // condition already satisfied at b+1
    CHECK(m.eta(4) == 2.0);
    CHECK(m.eta(9) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(m.eta(100) == doctest::Approx(10.0).epsilon(1e-14));

    const std::vector<std::uint64_t> js = {1, 4, 100};
    const auto table = m.norming_table(js);
    CHECK(table.rows[0].b_squared == 1.0);
    CHECK(table.rows[1].b_squared == 4.0);
    CHECK(table.rows[2].b_squared == 100.0);
    for (const auto& row : table.rows) CHECK(row.sigma_star == 1.0);
}

TEST_CASE("standard normal truncated moment matches the quadrature oracle") {
    const auto m = DistributionModel::standard_normal();
    for (double x : {0.3, 1.0, 2.0, 3.5}) {
        CHECK(m.truncated_second_moment(x) ==
              doctest::Approx(normal_l_oracle(x)).epsilon(1e-10));
    }
    CHECK(m.truncated_second_moment(40.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.truncated_second_moment(0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(m.truncated_second_moment(-1.0), std::domain_error);
}

TEST_CASE("standard normal sample variance concentrates") {
    const auto m = DistributionModel::standard_normal();
    Rng gen(42);
    const std::size_t n = 100000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = m.sample_one(gen);
        s += x;
        s2 += x * x;
    }
    const double mean = s / double(n);
    const double var = s2 / double(n) - mean * mean;
    CHECK(var > 0.97);
    CHECK(var < 1.03);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("uniform model: closed-form l against quadrature") {
    const auto m = DistributionModel::uniform_sym(2.0);
    for (double x : {0.5, 1.0, 1.9}) {
        const double oracle = snlab::quadrature::gl32(0.0, x, [](double t) { return t * t / 4.0; }) * 2.0;
        CHECK(m.truncated_second_moment(x) == doctest::Approx(oracle).epsilon(1e-12));
    }
    CHECK(m.truncated_second_moment(2.0) == doctest::Approx(4.0 / 3.0));
    CHECK(m.truncated_second_moment(100.0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("truncated moment is nondecreasing for every model") {
    const std::vector<DistributionModel> ms = {
        DistributionModel::rademacher(), DistributionModel::standard_normal(),
        DistributionModel::uniform_sym(3.0), DistributionModel::slow_vary_tail(0.5)};
    for (const auto& m : ms) {
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = std::exp(-6.0 + 20.0 * i / 1000.0);
            const double l = m.truncated_second_moment(x);
            CHECK(l >= prev);
            prev = l;
        }
    }
}

TEST_CASE("eta: bisection agrees with a brute-force grid oracle (normal)") {
    const auto m = DistributionModel::standard_normal();
    for (std::uint64_t j : {5ULL, 100ULL, 1000000ULL}) {
        const double eta = m.eta(j);
        CHECK(m.truncated_second_moment(eta) / (eta * eta) <= (1.0 / double(j)) * (1 + 1e-9));

        // brute force: first grid point satisfying the condition
        const double target = 1.0 / double(j);
        double lo = 2.0, hi = 4.0 * std::sqrt(double(j)) + 4.0;
        double found = hi;
        const int steps = 200000;
        for (int i = 0; i <= steps; ++i) {
            const double s = lo + (hi - lo) * i / steps;
            if (m.truncated_second_moment(s) / (s * s) <= target) {
                found = s;
                break;
            }
        }
        CHECK(eta == doctest::Approx(found).epsilon(2.0 * (hi - lo) / steps / found + 1e-9));
    }
}

TEST_CASE("eta inf property: the condition fails strictly below eta") {
    const std::vector<DistributionModel> ms = {
        DistributionModel::standard_normal(), DistributionModel::uniform_sym(2.0),
        DistributionModel::slow_vary_tail(0.5), DistributionModel::rademacher()};
    for (const auto& m : ms) {
        for (std::uint64_t j : {7ULL, 64ULL, 4096ULL}) {
            const double eta = m.eta(j);
            const double floor = m.atom_floor() + 1.0;
            if (eta <= floor * (1 + 1e-12)) continue;  // attained at the boundary
            for (int i = 0; i < 64; ++i) {
                // probes approach eta from below; stay clear of the bisection width
                const double s = floor + (eta * (1.0 - 1e-9) - floor) * i / 64.0;
                CHECK(m.truncated_second_moment(s) / (s * s) > 1.0 / double(j));
            }
        }
    }
}

TEST_CASE("norming table invariants") {
    const std::vector<std::uint64_t> js = {1, 2, 8, 64, 1024, 65536};
    for (const auto& m : {DistributionModel::standard_normal(),
                          DistributionModel::slow_vary_tail(0.5),
                          DistributionModel::uniform_sym(0.5)}) {
        const auto table = m.norming_table(js);
        double prev_eta = 0.0, prev_b2 = 0.0;
        for (const auto& row : table.rows) {
            CHECK(row.eta >= prev_eta);
            CHECK(row.eta >= m.atom_floor() + 1.0);
            CHECK(row.b_squared >= prev_b2);
            CHECK(row.l_eta / (row.eta * row.eta) <= (1.0 / double(row.j)) * (1 + 1e-9));
            CHECK(row.sigma_star <= std::sqrt(row.l_eta) * (1 + 1e-12));
            CHECK(row.sigma_star >= 0.0);
            prev_eta = row.eta;
            prev_b2 = row.b_squared;
        }
    }
    CHECK_THROWS_AS(DistributionModel::rademacher().norming_table(std::vector<std::uint64_t>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        DistributionModel::rademacher().norming_table(std::vector<std::uint64_t>{4, 4}),
        std::invalid_argument);
}

TEST_CASE("slow-vary-tail construction tracks its target") {
    const auto m = DistributionModel::slow_vary_tail(0.5, 2.0, 64);
    const auto xs = m.atom_positions();
    const auto ps = m.atom_masses();
    REQUIRE(xs.size() == 64);

    // mass at 0 absorbs the remainder
    double total = 0.0;
    for (double p : ps) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(total <= 1.0);
    CHECK(m.mass_at_zero() == doctest::Approx(1.0 - total).epsilon(1e-12));

    // l(x_k) = L(x_k) - L(1) exactly at grid points, so l/L -> 1
    double prev_ratio = 0.0;
    for (std::size_t k = 0; k < xs.size(); k += 7) {
        const double target = std::exp(std::sqrt(std::log(xs[k])));
        const double ratio = m.truncated_second_moment(xs[k]) / target;
        CHECK(ratio <= 1.0 + 1e-12);
        if (k > 0) CHECK(ratio >= prev_ratio - 1e-12);
        prev_ratio = ratio;
    }
    CHECK(m.truncated_second_moment(xs.back()) /
              std::exp(std::sqrt(std::log(xs.back()))) > 0.99);

    // sampled values live on the signed atom grid plus {0}
    Rng gen(3);
    for (int i = 0; i < 4000; ++i) {
        const double x = m.sample_one(gen);
        if (x == 0.0) continue;
        const auto it = std::lower_bound(xs.begin(), xs.end(), std::abs(x));
        REQUIRE(it != xs.end());
        CHECK(*it == std::abs(x));
    }
}

TEST_CASE("slow-vary-tail construction validation") {
    CHECK_THROWS_AS(DistributionModel::slow_vary_tail(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::slow_vary_tail(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::slow_vary_tail(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::slow_vary_tail(0.5, 2.0, 0), std::invalid_argument);
}

TEST_CASE("empirical truncated moment agrees with the analytic one") {
    const std::vector<DistributionModel> ms = {DistributionModel::standard_normal(),
                                               DistributionModel::uniform_sym(2.0),
                                               DistributionModel::slow_vary_tail(0.5)};
    const std::size_t n = 1000000;
    for (const auto& m : ms) {
        Rng gen(2024);
        std::vector<double> xs(n);
        for (auto& x : xs) x = m.sample_one(gen);
        for (int pi = 1; pi <= 10; ++pi) {
            const double x0 = 0.4 * pi * (m.family() == snlab::models::ModelFamily::SlowVaryTail
                                              ? 4.0
                                              : 1.0);
            double s = 0.0, s2 = 0.0;
            for (double x : xs) {
                const double term = (std::abs(x) <= x0) ? x * x : 0.0;
                s += term;
                s2 += term * term;
            }
            const double mean = s / double(n);
            const double sd = std::sqrt(std::max(0.0, s2 / double(n) - mean * mean));
            const double se = sd / std::sqrt(double(n));
            CHECK(std::abs(mean - m.truncated_second_moment(x0)) <= 5.0 * se + 1e-12);
        }
    }
}

TEST_CASE("renormalized dispersion: zero for rademacher, decreasing for normal") {
    const auto rad = DistributionModel::rademacher();
    for (std::uint64_t n : {1ULL, 10ULL, 1000ULL}) {
        CHECK(rad.renorm_dispersion(n) == 0.0);
    }
    const auto normal = DistributionModel::standard_normal();
    const double a100 = normal.renorm_dispersion(100);
    const double a10k = normal.renorm_dispersion(10000);
    CHECK(a100 > a10k);
    CHECK(a10k > 0.0);
}

TEST_CASE("model specs parse") {
    CHECK(DistributionModel::parse("rademacher").id() == "rademacher");
    CHECK(DistributionModel::parse("normal").id() == "normal");
    CHECK(DistributionModel::parse("uniform:1").truncated_second_moment(1.0) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(DistributionModel::parse("slowvary:0.5").atom_positions().size() == 64);
    CHECK(DistributionModel::parse("slowvary:0.5:2:32").atom_positions().size() == 32);
    CHECK_THROWS_AS(DistributionModel::parse("cauchy"), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::parse("uniform"), std::invalid_argument);
}
