#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "snlab/experiments.hpp"

using namespace snlab::experiments;
namespace wiener = snlab::wiener;
using snlab::models::DistributionModel;
using snlab::processes::FunctionalKind;
using snlab::processes::FunctionalSpec;
using snlab::processes::Normalization;
using snlab::weights::WeightFunction;

TEST_CASE("tau rules resolve") {
    CHECK(resolve_tau(TauRule::OneOverN, 0.0, 100) == doctest::Approx(0.01));
    CHECK(resolve_tau(TauRule::OneOverLogN, 0.0, 10000) ==
          doctest::Approx(1.0 / std::log(10000.0)));
    CHECK(resolve_tau(TauRule::Fixed, 0.25, 10) == 0.25);
    CHECK_THROWS_AS(resolve_tau(TauRule::Fixed, 1.5, 10), std::domain_error);
}

TEST_CASE("norming constant for rademacher is sqrt(n)") {
    const auto m = DistributionModel::rademacher();
    CHECK(norming_constant(m, 100) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(norming_constant(m, 4096) == doctest::Approx(64.0).epsilon(1e-13));
}

TEST_CASE("functional samples are deterministic and thread-count independent") {
    const auto model = DistributionModel::standard_normal();
    const auto weight = WeightFunction::constant(1.0);
    FunctionalSpec spec;
    spec.kind = FunctionalKind::WeightedSup;

    RunOptions a;
    a.seed = 321;
    a.replicates = 400;
    a.threads = 1;
    RunOptions b = a;
    b.threads = 4;

    const auto ra = functional_samples(model, weight, spec, 500, a, "determinism");
    const auto rb = functional_samples(model, weight, spec, 500, b, "determinism");
    REQUIRE(ra.dist.count() == rb.dist.count());
    for (std::size_t i = 0; i < ra.dist.count(); ++i) {
        CHECK(ra.dist.values()[i] == rb.dist.values()[i]);
    }
}

TEST_CASE("rademacher: BySelf and ByBn coincide path by path") {
    const auto model = DistributionModel::rademacher();
    const auto weight = WeightFunction::constant(1.0);
    RunOptions opts;
    opts.seed = 7;
    opts.replicates = 300;
    opts.threads = 2;

    FunctionalSpec self_spec;
    self_spec.norm = Normalization::by_self();
    FunctionalSpec bn_spec;
    bn_spec.norm = Normalization::by_bn(norming_constant(model, 256));

    const auto a = functional_samples(model, weight, self_spec, 256, opts, "pairing");
    const auto b = functional_samples(model, weight, bn_spec, 256, opts, "pairing");
    REQUIRE(a.dist.count() == b.dist.count());
    for (std::size_t i = 0; i < a.dist.count(); ++i) {
        CHECK(a.dist.values()[i] == b.dist.values()[i]);  // V_n^2 = n = b_n^2 exactly
    }
}

TEST_CASE("vn/bn concentration: rademacher fraction is exactly one") {
    const auto model = DistributionModel::rademacher();
    RunOptions opts;
    opts.seed = 5;
    opts.replicates = 64;
    const std::vector<std::uint64_t> ns = {16, 64};
    const auto rows = run_vn_bn_concentration(model, ns, opts, 0.1);
    REQUIRE(rows.size() == 2);
    for (const auto& [n, frac] : rows) CHECK(frac == 1.0);
    CHECK_THROWS_AS(run_vn_bn_concentration(model, ns, opts, 0.0), std::domain_error);
}

TEST_CASE("ad188 rows: rademacher identically zero") {
    const std::vector<std::uint64_t> ns = {1, 8, 256};
    const auto rows = run_ad188_check(DistributionModel::rademacher(), ns);
    for (const auto& [n, v] : rows) CHECK(v == 0.0);
}

TEST_CASE("degenerate student paths are counted, not sampled") {
    // n = 2 rademacher: (+1,+1) and (-1,-1) hit the Student singularity, p = 1/2
    const auto model = DistributionModel::rademacher();
    const auto weight = WeightFunction::constant(1.0);
    FunctionalSpec spec;
    spec.norm = Normalization::by_student();
    RunOptions opts;
    opts.seed = 11;
    opts.replicates = 128;
    const auto res = functional_samples(model, weight, spec, 2, opts, "degen");
    CHECK(res.degenerate_count > 20);
    CHECK(res.degenerate_count < 110);
    CHECK(res.dist.count() + res.degenerate_count == opts.replicates);
    CHECK(res.dist.meta().extra.count("degenerate") == 1);
}

TEST_CASE("student and self-normalized samples nearly coincide at large n") {
    const auto model = DistributionModel::standard_normal();
    const auto weight = WeightFunction::constant(1.0);
    RunOptions opts;
    opts.seed = 2024;
    opts.replicates = 300;
    opts.threads = 2;

    FunctionalSpec self_spec;
    FunctionalSpec stu_spec;
    stu_spec.norm = Normalization::by_student();
    const auto a = functional_samples(model, weight, self_spec, 1000, opts, "stu");
    const auto b = functional_samples(model, weight, stu_spec, 1000, opts, "stu");
    CHECK(snlab::stats::ks_distance(a.dist, b.dist) < 0.03);
}

TEST_CASE("convergence experiments refuse inadmissible weights") {
    const auto model = DistributionModel::standard_normal();
    RunOptions opts;
    opts.seed = 1;
    opts.replicates = 8;
    const std::vector<std::uint64_t> ns = {16};
    const snlab::stats::EmpiricalDistribution dummy({1.0, 2.0}, {});

    CHECK_THROWS_AS(run_functional_convergence(model, WeightFunction::power(0.5),
                                               FunctionalKind::WeightedSup,
                                               Normalization::Mode::BySelf, ns, opts,
                                               TauRule::OneOverN, 0.0, 1.0, dummy),
                    snlab::wiener::LimitRefusal);
    CHECK_THROWS_AS(
        run_lp_convergence(model, WeightFunction::power(2.0), 1.0, ns, opts, dummy),
        snlab::wiener::LimitRefusal);
}

TEST_CASE("functional convergence produces ordered rows and a trend hint") {
    const auto model = DistributionModel::standard_normal();
    const auto weight = WeightFunction::constant(1.0);
    RunOptions opts;
    opts.seed = 99;
    opts.replicates = 200;
    opts.threads = 2;

    wiener::LimitOptions wopts;
    wopts.seed = 99;
    wopts.replicates = 200;
    wopts.threads = 2;
    const auto grid = wiener::WienerGrid::make(256, 0.9, 1e-8);
    const auto limit = wiener::limit_sup_functional(weight, grid, wopts);

    const std::vector<std::uint64_t> ns = {32, 256};
    const auto rep = run_functional_convergence(model, weight, FunctionalKind::WeightedSup,
                                                Normalization::Mode::BySelf, ns, opts,
                                                TauRule::OneOverN, 0.0, 1.0, limit);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].n == 32);
    CHECK(rep.rows[1].n == 256);
    for (const auto& row : rep.rows) {
        CHECK(row.ks_to_limit >= 0.0);
        CHECK(row.ks_to_limit <= 1.0);
        CHECK(row.median > 0.0);
    }
    CHECK(!rep.verdict_hint.empty());
}

TEST_CASE("counterexample report at desk scale") {
    RunOptions opts;
    opts.seed = 13;
    opts.replicates = 500;
    opts.threads = 2;
    const std::vector<std::uint64_t> ns = {1000, 10000};
    const auto rep = run_counterexample(ns, opts);
    REQUIRE(rep.ns.size() == 2);
    CHECK(rep.threshold == 0.25);
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
        CHECK(rep.p_loglog[i] >= 0.0);
        CHECK(rep.p_loglog[i] <= 1.0);
        CHECK(rep.p_contrast[i] >= 0.0);
        CHECK(rep.p_contrast[i] <= 1.0);
        CHECK(rep.l_ratio[i] > 0.0);
        CHECK(rep.l_ratio[i] < 1.0);
        CHECK(rep.l_ratio_bound[i] > 0.0);
    }
    CHECK(rep.lower_bound[1] > rep.lower_bound[0]);  // grows like sqrt(log n)
}
