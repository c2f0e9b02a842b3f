#include "snlab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snlab::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values, Meta meta)
    : values_(std::move(values)), meta_(std::move(meta)) {
    if (values_.empty()) throw std::invalid_argument("empirical distribution must be nonempty");
    for (double v : values_) {
        if (std::isnan(v)) throw std::invalid_argument("empirical distribution contains NaN");
    }
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return double(it - values_.begin()) / double(values_.size());
}

double EmpiricalDistribution::quantile(double p) const {
    if (!(p >= 0.0) || p > 1.0) throw std::domain_error("quantile level outside [0,1]");
    if (values_.size() == 1) return values_.front();
    const double pos = p * double(values_.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values_.size()) return values_.back();
    const double frac = pos - double(lo);
    return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
}

double EmpiricalDistribution::tail_fraction_above(double x) const {
    return 1.0 - ecdf(x);
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance on empty sample");
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    // Once one sample is exhausted its ECDF stays put while the other
    // climbs to 1; the maximum gap there is at the crossover just handled.
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    return d;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return ks_distance(std::span<const double>(a.values()), std::span<const double>(b.values()));
}

}  // namespace snlab::stats
