#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snlab/artifact_io.hpp"
#include "snlab/config.hpp"
#include "snlab/rng.hpp"

using namespace snlab;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

stats::EmpiricalDistribution sample_dist(std::size_t n) {
    rng::Rng gen(123);
    std::vector<double> v(n);
    for (auto& x : v) x = gen.normal() * std::exp(40.0 * (gen.uniform01() - 0.5));
    v[0] = 0.0;
    v[1] = 5e-324;  // denormal survives the round trip too
    stats::Meta meta;
    meta.model = "normal";
    meta.weight = "const:1";
    meta.functional = "sup";
    meta.n = 42;
    meta.seed = 99;
    meta.replicates = n;
    meta.extra["tau"] = "0.01";
    return stats::EmpiricalDistribution(std::move(v), std::move(meta));
}

}  // namespace

TEST_CASE("hexfloat round trip is bitwise") {
    rng::Rng gen(5);
    for (int i = 0; i < 2000; ++i) {
        const double x = gen.normal() * std::exp(80.0 * (gen.uniform01() - 0.5));
        CHECK(io::parse_hexfloat(io::hexfloat(x)) == x);
    }
    CHECK(io::parse_hexfloat(io::hexfloat(0.0)) == 0.0);
    CHECK_THROWS_AS(io::parse_hexfloat("zzz"), io::FormatError);
}

TEST_CASE("distribution artifacts round trip exactly") {
    const auto path = temp_file("snlab_io_test.dist");
    const auto d = sample_dist(10000);
    io::write_distribution(d, path);
    const auto r = io::read_distribution(path);
    REQUIRE(r.count() == d.count());
    for (std::size_t i = 0; i < d.count(); ++i) CHECK(r.values()[i] == d.values()[i]);
    CHECK(r.meta().model == "normal");
    CHECK(r.meta().weight == "const:1");
    CHECK(r.meta().n == 42);
    CHECK(r.meta().extra.at("tau") == "0.01");
    std::filesystem::remove(path);
}

TEST_CASE("artifact format errors are explicit") {
    const auto path = temp_file("snlab_io_bad.dist");
    {
        std::ofstream out(path);
        out << R"({"format_version":99,"kind":"snlab-distribution","count":1,"meta":{}})"
            << "\n0x1p+0\n";
    }
    CHECK_THROWS_AS(io::read_distribution(path), io::FormatError);
    {
        std::ofstream out(path);
        out << "not json\n";
    }
    CHECK_THROWS_AS(io::read_distribution(path), io::FormatError);
    {
        std::ofstream out(path);
        out << R"({"format_version":1,"kind":"snlab-distribution","count":3,"meta":{}})"
            << "\n0x1p+0\n";
    }
    CHECK_THROWS_AS(io::read_distribution(path), io::FormatError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(io::read_distribution(path), io::IoError);
}

TEST_CASE("config: minimal document fills defaults") {
    const auto cfg = config::parse_config_string(
        "model = rademacher\nweight = const:1\nseed = 42\nns = 100,1000\n");
    CHECK(cfg.model == "rademacher");
    CHECK(cfg.replicates == 2000);
    CHECK(cfg.tau_rule == experiments::TauRule::OneOverN);
    CHECK(cfg.normalization == "self");
    CHECK(cfg.seed == 42);
    REQUIRE(cfg.ns.size() == 2);
}

TEST_CASE("config: full document round trips through render") {
    const char* text =
        "model = slowvary:0.5\n"
        "weight = sqrtlog:1\n"
        "functional = lp\n"
        "p = 2\n"
        "normalization = student\n"
        "tau = fixed:0.125\n"
        "ns = 10,100,1000\n"
        "replicates = 500\n"
        "seed = 7\n"
        "threads = 3\n"
        "output_dir = /tmp/out\n";
    const auto cfg = config::parse_config_string(text);
    const auto echoed = config::parse_config_string(config::render_config(cfg));
    CHECK(echoed.model == cfg.model);
    CHECK(echoed.weight == cfg.weight);
    CHECK(echoed.kind == cfg.kind);
    CHECK(echoed.p == cfg.p);
    CHECK(echoed.normalization == cfg.normalization);
    CHECK(echoed.tau_rule == cfg.tau_rule);
    CHECK(echoed.tau_fixed == cfg.tau_fixed);
    CHECK(echoed.ns == cfg.ns);
    CHECK(echoed.replicates == cfg.replicates);
    CHECK(echoed.seed == cfg.seed);
    CHECK(echoed.threads == cfg.threads);
}

TEST_CASE("config: seeds are mandatory") {
    CHECK_THROWS_AS(
        config::parse_config_string("model = rademacher\nweight = const:1\nns = 10\n"),
        config::ValidationError);
    try {
        config::parse_config_string("model = rademacher\nweight = const:1\nns = 10\n");
    } catch (const config::ValidationError& e) {
        CHECK(std::string(e.what()).find("seed") != std::string::npos);
    }
}

TEST_CASE("config: non-increasing ns is a validation error") {
    CHECK_THROWS_AS(config::parse_config_string(
                        "model = rademacher\nweight = const:1\nseed = 1\nns = 100,10\n"),
                    config::ValidationError);
}

TEST_CASE("config: every violation is listed at once") {
    try {
        config::parse_config_string("replicates = 0\nns = 5,5\n");
        CHECK(false);
    } catch (const config::ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("model") != std::string::npos);
        CHECK(msg.find("weight") != std::string::npos);
        CHECK(msg.find("seed") != std::string::npos);
        CHECK(msg.find("replicates") != std::string::npos);
        CHECK(msg.find("increasing") != std::string::npos);
    }
}

TEST_CASE("config: parse errors carry line numbers") {
    try {
        config::parse_config_string("model = rademacher\nwhat is this\n");
        CHECK(false);
    } catch (const config::ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(config::parse_config_string("unknown_key = 3\n"), config::ParseError);
    CHECK_THROWS_AS(config::parse_config_string("replicates = abc\n"), config::ParseError);
    CHECK_THROWS_AS(config::parse_config_string("functional = cube\n"), config::ParseError);
}
