#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace snlab::stats {

// Provenance attached to every sampled distribution; round-trips through
// the artifact files unchanged.
struct Meta {
    std::string model;
    std::string weight;
    std::string functional;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t replicates = 0;
    std::map<std::string, std::string> extra;

    bool compatible_with(const Meta& other) const {
        return weight == other.weight && functional == other.functional;
    }
};

// Sorted sample of functional replicate values with ECDF/quantile access.
class EmpiricalDistribution {
public:
    EmpiricalDistribution(std::vector<double> values, Meta meta);

    std::size_t count() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const Meta& meta() const { return meta_; }
    Meta& meta() { return meta_; }

    // Right-continuous step ECDF with jumps 1/count.
    double ecdf(double x) const;

    // Order-statistic quantile, linear between adjacent order statistics;
    // quantile(0) = min, quantile(1) = max.
    double quantile(double p) const;

    double median() const { return quantile(0.5); }
    double iqr() const { return quantile(0.75) - quantile(0.25); }

    // Fraction of values strictly above x.
    double tail_fraction_above(double x) const;

private:
    std::vector<double> values_;  // ascending
    Meta meta_;
};

// Exact two-sample Kolmogorov-Smirnov distance via merge scan over the
// pooled jump points.
double ks_distance(std::span<const double> sorted_a, std::span<const double> sorted_b);
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

}  // namespace snlab::stats
