#include "snlab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snlab/quadrature.hpp"

namespace snlab::processes {

namespace {

// Index k with k/n <= t < (k+1)/n under exact double comparisons against the
// same k/n values the evaluation grids use; repairs the one-ulp slips of
// floor(t*n). [n*1] = n.
std::size_t floor_index(double t, std::size_t n) {
    if (t >= 1.0) return n;
    auto k = static_cast<std::size_t>(std::floor(t * double(n)));
    k = std::min(k, n);
    while (k > 0 && double(k) / double(n) > t) --k;
    while (k < n && double(k + 1) / double(n) <= t) ++k;
    return k;
}

void check_unit_interval(double t) {
    if (t < 0.0 || t > 1.0) throw std::domain_error("path time outside [0,1]");
}

}  // namespace

PathSample::PathSample(std::vector<double> increments) : increments_(std::move(increments)) {
    if (increments_.empty()) throw std::invalid_argument("path needs at least one increment");
    partial_sums_.resize(increments_.size() + 1);
    partial_sums_[0] = 0.0;
    double s = 0.0, v2 = 0.0;
    for (std::size_t i = 0; i < increments_.size(); ++i) {
        s += increments_[i];
        v2 += increments_[i] * increments_[i];
        partial_sums_[i + 1] = s;
    }
    v_squared_ = v2;
}

double PathSample::sum_at(double t) const {
    check_unit_interval(t);
    return partial_sums_[floor_index(t, n())];
}

double self_normalized_value(const PathSample& path, double t) {
    if (path.v_squared() <= 0.0) throw DegeneratePathError("V_n = 0: all increments vanish");
    return path.sum_at(t) / std::sqrt(path.v_squared());
}

double student_factor(const PathSample& path) {
    const auto n = double(path.n());
    if (path.n() < 2) throw std::domain_error("student process needs n >= 2");
    if (path.v_squared() <= 0.0) throw DegeneratePathError("V_n = 0: all increments vanish");
    const double r = path.partial_sum(path.n()) / std::sqrt(path.v_squared());
    const double denom = n - r * r;
    // |S_n| = sqrt(n) V_n makes denom 0 up to rounding; catch that band
    if (denom <= n * 1e-12) {
        throw StudentDegenerateError("n - (S_n/V_n)^2 = 0: Student denominator vanishes");
    }
    return std::sqrt((n - 1.0) / denom);
}

double student_value(const PathSample& path, double t) {
    return self_normalized_value(path, t) * student_factor(path);
}

double path_value(const PathSample& path, double t, const Normalization& norm) {
    switch (norm.mode) {
        case Normalization::Mode::BySelf:
            return self_normalized_value(path, t);
        case Normalization::Mode::ByStudent:
            return student_value(path, t);
        case Normalization::Mode::ByBn:
            if (!(norm.b_n > 0.0)) throw std::domain_error("ByBn needs b_n > 0");
            return path.sum_at(t) / norm.b_n;
    }
    throw std::logic_error("unreachable normalization mode");
}

double weighted_sup(const std::function<double(double)>& value,
                    const weights::WeightFunction& q, double tau, std::size_t n) {
    if (tau >= 1.0) throw std::domain_error("weighted_sup needs tau < 1");
    if (n < 1) throw std::domain_error("weighted_sup needs n >= 1");
    const double tau_eff = std::max(tau, 1.0 / double(n));

    double best = 0.0;
    const auto probe = [&](double t) {
        if (t < tau_eff || t > 1.0) return;
        best = std::max(best, std::abs(value(t)) / q.eval(t));
    };

    probe(tau_eff);
    const auto k_first = static_cast<std::size_t>(std::ceil(tau_eff * double(n) - 1e-9));
    for (std::size_t k = std::max<std::size_t>(k_first, 1); k <= n; ++k) {
        probe(double(k) / double(n));
        if (k < n) {
            // right end of the constancy interval [k/n, (k+1)/n), one ulp in
            probe(std::nextafter(double(k + 1) / double(n), 0.0));
        }
    }
    // interval containing tau_eff also ends just before the next jump
    const auto k_tau = floor_index(tau_eff, n);
    if (k_tau < n) probe(std::nextafter(double(k_tau + 1) / double(n), 0.0));
    return best;
}

double weighted_lp(const std::function<double(double)>& value,
                   const weights::WeightFunction& q, double p, std::size_t n) {
    if (!(p > 0.0)) throw std::domain_error("weighted_lp needs p > 0");
    if (n < 1) throw std::domain_error("weighted_lp needs n >= 1");
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = double(k) / double(n);
        const double b = double(k + 1) / double(n);
        const double v = value(a);
        if (v == 0.0) continue;  // the [0,1/n) interval always lands here
        const double wint = quadrature::gl8(a, b, [&](double t) { return 1.0 / q.eval(t); });
        acc += std::pow(std::abs(v), p) * wint;
    }
    return acc;
}

double functional_value(const PathSample& path, const weights::WeightFunction& q,
                        const FunctionalSpec& spec) {
    const auto value = [&](double t) { return path_value(path, t, spec.norm); };
    if (spec.kind == FunctionalKind::WeightedSup) {
        return weighted_sup(value, q, spec.tau, path.n());
    }
    return weighted_lp(value, q, spec.p, path.n());
}

std::vector<double> weight_interval_integrals(const weights::WeightFunction& q, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = quadrature::gl8(double(k) / double(n), double(k + 1) / double(n),
                                 [&](double t) { return 1.0 / q.eval(t); });
    }
    return out;
}

FunctionalEvaluator::FunctionalEvaluator(const weights::WeightFunction& q, FunctionalSpec spec,
                                         std::size_t n)
    : spec_(spec), n_(n) {
    if (n < 1) throw std::domain_error("FunctionalEvaluator needs n >= 1");
    if (spec_.kind == FunctionalKind::WeightedLp) {
        if (!(spec_.p > 0.0)) throw std::domain_error("weighted_lp needs p > 0");
        table_ = weight_interval_integrals(q, n);
        return;
    }
    if (spec_.tau >= 1.0) throw std::domain_error("weighted_sup needs tau < 1");
    const double tau_eff = std::max(spec_.tau, 1.0 / double(n));
    const std::size_t k_tau = floor_index(tau_eff, n);
    const auto k_first =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau_eff * double(n) - 1e-9)));

    table_.assign(n + 1, 0.0);
    const auto note = [&](std::size_t k, double t) {
        table_[k] = std::max(table_[k], 1.0 / q.eval(t));
    };
    note(k_tau, tau_eff);
    for (std::size_t k = k_first; k <= n; ++k) note(k, double(k) / double(n));
    for (std::size_t k = k_tau; k < n; ++k) {
        note(k, std::nextafter(double(k + 1) / double(n), 0.0));
    }
}

double FunctionalEvaluator::operator()(const std::vector<double>& increments) const {
    if (increments.size() != n_) throw std::invalid_argument("increment count mismatch");
    const bool self = spec_.norm.mode != Normalization::Mode::ByBn;

    double s = 0.0, v2 = 0.0, acc = 0.0;
    if (spec_.kind == FunctionalKind::WeightedSup) {
        for (std::size_t k = 1; k <= n_; ++k) {
            s += increments[k - 1];
            v2 += increments[k - 1] * increments[k - 1];
            acc = std::max(acc, std::abs(s) * table_[k]);
        }
    } else {
        for (std::size_t k = 1; k < n_; ++k) {
            s += increments[k - 1];
            v2 += increments[k - 1] * increments[k - 1];
            acc += std::pow(std::abs(s), spec_.p) * table_[k];
        }
        s += increments[n_ - 1];
        v2 += increments[n_ - 1] * increments[n_ - 1];
    }

    double scale;
    if (!self) {
        if (!(spec_.norm.b_n > 0.0)) throw std::domain_error("ByBn needs b_n > 0");
        scale = 1.0 / spec_.norm.b_n;
    } else {
        if (v2 <= 0.0) throw DegeneratePathError("V_n = 0: all increments vanish");
        scale = 1.0 / std::sqrt(v2);
        if (spec_.norm.mode == Normalization::Mode::ByStudent) {
            const double r = s * scale;
            const double denom = double(n_) - r * r;
            if (n_ < 2) throw std::domain_error("student process needs n >= 2");
            if (denom <= double(n_) * 1e-12) {
                throw StudentDegenerateError("n - (S_n/V_n)^2 = 0: Student denominator vanishes");
            }
            scale *= std::sqrt((double(n_) - 1.0) / denom);
        }
    }
    if (spec_.kind == FunctionalKind::WeightedLp) {
        return acc * std::pow(scale, spec_.p);
    }
    return acc * scale;
}

}  // namespace snlab::processes
