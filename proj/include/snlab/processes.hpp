#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snlab/weights.hpp"

namespace snlab::processes {

// V_n^2 = 0: self-normalization undefined.
struct DegeneratePathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// n - (S_n/V_n)^2 = 0: the Student denominator vanishes (all increments
// equal up to sign alignment). Distinct from the V_n = 0 case.
struct StudentDegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One realization of n increments with partial sums S_0..S_n and V_n^2.
class PathSample {
public:
    explicit PathSample(std::vector<double> increments);

    std::size_t n() const { return increments_.size(); }
    const std::vector<double>& increments() const { return increments_; }
    double partial_sum(std::size_t k) const { return partial_sums_[k]; }  // S_k, k = 0..n
    double v_squared() const { return v_squared_; }

    // S_[nt]; [n*1] = n.
    double sum_at(double t) const;

private:
    std::vector<double> increments_;
    std::vector<double> partial_sums_;
    double v_squared_ = 0.0;
};

// S_[nt] / V_n for t in [0,1].
double self_normalized_value(const PathSample& path, double t);

// (S_[nt]/V_n) / sqrt((n - (S_n/V_n)^2)/(n-1)) -- the Student process T_{n,t}.
double student_value(const PathSample& path, double t);

// The constant-in-t factor linking the two: student = self_normalized * factor.
double student_factor(const PathSample& path);

enum class FunctionalKind { WeightedSup, WeightedLp };

struct Normalization {
    enum class Mode { ByBn, BySelf, ByStudent };
    Mode mode = Mode::BySelf;
    double b_n = 0.0;  // ByBn only

    static Normalization by_self() { return {Mode::BySelf, 0.0}; }
    static Normalization by_student() { return {Mode::ByStudent, 0.0}; }
    static Normalization by_bn(double b_n) { return {Normalization::Mode::ByBn, b_n}; }
};

struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::WeightedSup;
    double tau = 0.0;  // WeightedSup; tau = 0 means 1/n at evaluation time
    double p = 1.0;    // WeightedLp
    Normalization norm;
};

// Normalized path value at t under the given normalization.
double path_value(const PathSample& path, double t, const Normalization& norm);

// sup over {max(tau,1/n)} u {jump points k/n >= tau} u {right endpoints - 1 ulp}
// of |value(t)| / q(t). Exact for step paths against piecewise-monotone weights.
double weighted_sup(const std::function<double(double)>& value,
                    const weights::WeightFunction& q, double tau, std::size_t n);

// sum_k |value(k/n)|^p * int_{k/n}^{(k+1)/n} dt/q(t), the exact step-function
// integral; the weight integral uses 8-point Gauss-Legendre per interval.
double weighted_lp(const std::function<double(double)>& value,
                   const weights::WeightFunction& q, double p, std::size_t n);

// Convenience wrapper evaluating a PathSample under spec.norm.
double functional_value(const PathSample& path, const weights::WeightFunction& q,
                        const FunctionalSpec& spec);

// Precomputes the weight at every evaluation point once per (weight, spec, n)
// and then evaluates increment vectors in a single streaming pass.
// Algebraically identical to functional_value; equality is covered by tests.
class FunctionalEvaluator {
public:
    FunctionalEvaluator(const weights::WeightFunction& q, FunctionalSpec spec, std::size_t n);

    double operator()(const std::vector<double>& increments) const;

    std::size_t n() const { return n_; }
    const FunctionalSpec& spec() const { return spec_; }

private:
    FunctionalSpec spec_;
    std::size_t n_;
    // WeightedSup: table_[k] = max over candidate points carrying S_k of 1/q;
    // WeightedLp:  table_[k] = int_{k/n}^{(k+1)/n} dt/q.
    std::vector<double> table_;
};

// Per-interval weight integrals int_{k/n}^{(k+1)/n} dt/q for k = 0..n-1.
std::vector<double> weight_interval_integrals(const weights::WeightFunction& q, std::size_t n);

}  // namespace snlab::processes
