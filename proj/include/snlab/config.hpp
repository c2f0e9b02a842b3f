#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snlab/experiments.hpp"
#include "snlab/processes.hpp"

namespace snlab::config {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Carries every violated invariant, one per line.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string model;
    std::string weight;
    processes::FunctionalKind kind = processes::FunctionalKind::WeightedSup;
    double p = 1.0;
    std::string normalization = "self";  // self | student | bn
    experiments::TauRule tau_rule = experiments::TauRule::OneOverN;
    double tau_fixed = 0.0;
    std::vector<std::uint64_t> ns;
    std::uint64_t replicates = 2000;
    std::uint64_t seed = 0;  // mandatory in config files, no wall-clock default
    std::string output_dir = ".";
    int threads = 1;
};

// Parses "key = value" lines ('#' comments). Throws ParseError with a line
// diagnostic on malformed input, then ValidationError listing every violated
// invariant. Defaults: replicates 2000, tau rule 1/n, normalization self.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);

// Resolved-config echo embedded into output artifacts.
std::string render_config(const ExperimentConfig& cfg);

std::vector<std::uint64_t> parse_n_list(const std::string& text);

}  // namespace snlab::config
