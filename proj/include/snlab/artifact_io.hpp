#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "snlab/empirical.hpp"

namespace snlab::io {

inline constexpr int kFormatVersion = 1;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lossless textual float round trip (C hexfloat).
std::string hexfloat(double x);
double parse_hexfloat(const std::string& s);

// Artifact layout: a one-line JSON header (format version, provenance meta,
// code version, count) followed by one hexfloat value per line, ascending.
// read(write(d)) == d bitwise.
void write_distribution(const stats::EmpiricalDistribution& d, const std::filesystem::path& path);
stats::EmpiricalDistribution read_distribution(const std::filesystem::path& path);

}  // namespace snlab::io
