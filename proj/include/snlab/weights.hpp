#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snlab::weights {

enum class Family { Power, SqrtLogLog, SqrtLog, Constant, Custom };

struct Knot {
    double t;
    double q;
};

// log(max(e, x)) -- the paper-wide guarded logarithm.
double guarded_log(double x);

// A positive weight q on (0,1], nondecreasing on (0, monotone_delta].
//
// Built-in families:
//   Power(nu)       q(t) = t^nu,                       nu > 0
//   SqrtLogLog(a)   q(t) = sqrt(a t loglog(1/t)),      guarded logs
//   SqrtLog(a)      q(t) = sqrt(a t log(1/t)),         guarded log
//   Constant(k)     q(t) = k
//   Custom          piecewise-linear in (log t, log q) between knots,
//                   clamped to the end values outside the knot range
//
// A multiplicative scale (see scaled()) turns q into lambda*q without
// leaving the class.
class WeightFunction {
public:
    static WeightFunction power(double nu);
    static WeightFunction sqrt_log_log(double a);
    static WeightFunction sqrt_log(double a);
    static WeightFunction constant(double k);
    static WeightFunction custom(std::vector<Knot> knots, double monotone_delta);

    // Parses "power:0.4", "sqrtloglog:1", "sqrtlog:1", "const:1",
    // "custom:<path>" (knot file: lines "t q").
    static WeightFunction parse(std::string_view spec);

    // q(t); throws std::domain_error unless 0 < t <= 1.
    double operator()(double t) const { return eval(t); }
    double eval(double t) const;

    // q^2(t)/t, evaluated without forming q when a stable direct form
    // exists (the integral criterion works at extremely small t).
    double squared_over_t(double t) const;

    // The weight lambda*q with everything else unchanged.
    WeightFunction scaled(double lambda) const;

    Family family() const { return family_; }
    double param() const { return param_; }
    double scale() const { return scale_; }
    double monotone_delta() const { return monotone_delta_; }
    const std::string& id() const { return id_; }

private:
    WeightFunction() = default;

    Family family_ = Family::Constant;
    double param_ = 1.0;           // nu / a / k depending on family
    double scale_ = 1.0;           // multiplicative scale lambda
    double monotone_delta_ = 1.0;  // q nondecreasing on (0, delta]
    std::vector<Knot> knots_;      // Custom only, sorted by t
    std::string id_;

    double eval_unscaled(double t) const;
};

struct ValidationReport {
    bool positive = true;
    bool monotone = true;
    std::vector<std::string> violations;
    // (t, sqrt(t)/q(t)) at the smallest grid points; diagnostic for the
    // requirement lim_{t->0} t^{1/2}/q(t) = 0 under a finite criterion.
    std::vector<std::pair<double, double>> sqrt_t_over_q_head;
    bool passed() const { return positive && monotone; }
};

// Positivity on a log-spaced grid over [1e-12, 1], monotonicity on
// (1e-12, monotone_delta]. Violations are reported, not thrown.
ValidationReport validate_class_q(const WeightFunction& w, int grid_size);

}  // namespace snlab::weights
