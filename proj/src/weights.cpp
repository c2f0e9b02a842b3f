#include "snlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snlab::weights {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

void check_domain(double t) {
    if (!(t > 0.0) || t > 1.0) {
        throw std::domain_error("weight evaluated outside (0,1]: t=" + std::to_string(t));
    }
}

std::string format_param(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

double guarded_log(double x) { return std::log(std::max(kE, x)); }

WeightFunction WeightFunction::power(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("power weight needs nu > 0");
    WeightFunction w;
    w.family_ = Family::Power;
    w.param_ = nu;
    w.monotone_delta_ = 1.0;
    w.id_ = "power:" + format_param(nu);
    return w;
}

WeightFunction WeightFunction::sqrt_log_log(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("sqrtloglog weight needs a > 0");
    WeightFunction w;
    w.family_ = Family::SqrtLogLog;
    w.param_ = a;
    w.monotone_delta_ = std::exp(-kE);
    w.id_ = "sqrtloglog:" + format_param(a);
    return w;
}

WeightFunction WeightFunction::sqrt_log(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("sqrtlog weight needs a > 0");
    WeightFunction w;
    w.family_ = Family::SqrtLog;
    w.param_ = a;
    w.monotone_delta_ = std::exp(-1.0);
    w.id_ = "sqrtlog:" + format_param(a);
    return w;
}

WeightFunction WeightFunction::constant(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("constant weight needs k > 0");
    WeightFunction w;
    w.family_ = Family::Constant;
    w.param_ = k;
    w.monotone_delta_ = 1.0;
    w.id_ = "const:" + format_param(k);
    return w;
}

WeightFunction WeightFunction::custom(std::vector<Knot> knots, double monotone_delta) {
    if (knots.size() < 2) throw std::invalid_argument("custom weight needs >= 2 knots");
    if (!(monotone_delta > 0.0) || monotone_delta > 1.0) {
        throw std::invalid_argument("monotone_delta must lie in (0,1]");
    }
    std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].t > 0.0) || knots[i].t > 1.0) {
            throw std::invalid_argument("custom knot t outside (0,1]");
        }
        if (!(knots[i].q > 0.0)) throw std::invalid_argument("custom knot q must be positive");
        if (i > 0 && knots[i].t == knots[i - 1].t) {
            throw std::invalid_argument("duplicate custom knot abscissa");
        }
    }
    WeightFunction w;
    w.family_ = Family::Custom;
    w.monotone_delta_ = monotone_delta;
    w.knots_ = std::move(knots);
    w.id_ = "custom[" + std::to_string(w.knots_.size()) + " knots]";
    return w;
}

WeightFunction WeightFunction::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string head(spec.substr(0, colon));
    const std::string arg(colon == std::string_view::npos ? "" : spec.substr(colon + 1));
    auto num = [&]() {
        if (arg.empty()) throw std::invalid_argument("weight spec '" + std::string(spec) +
                                                     "' is missing its parameter");
        std::size_t pos = 0;
        const double v = std::stod(arg, &pos);
        if (pos != arg.size()) throw std::invalid_argument("bad weight parameter '" + arg + "'");
        return v;
    };
    if (head == "power") return power(num());
    if (head == "sqrtloglog") return sqrt_log_log(num());
    if (head == "sqrtlog") return sqrt_log(num());
    if (head == "const") return constant(num());
    if (head == "custom") {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open custom weight file '" + arg + "'");
        std::vector<Knot> knots;
        double t, q;
        while (in >> t >> q) knots.push_back({t, q});
        return custom(std::move(knots), 1.0);
    }
    throw std::invalid_argument("unknown weight family '" + head + "'");
}

double WeightFunction::eval_unscaled(double t) const {
    switch (family_) {
        case Family::Power:
            return std::pow(t, param_);
        case Family::SqrtLogLog:
            return std::sqrt(param_ * t * guarded_log(guarded_log(1.0 / t)));
        case Family::SqrtLog:
            return std::sqrt(param_ * t * guarded_log(1.0 / t));
        case Family::Constant:
            return param_;
        case Family::Custom: {
            if (t <= knots_.front().t) return knots_.front().q;
            if (t >= knots_.back().t) return knots_.back().q;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double x, const Knot& k) { return x < k.t; });
            const Knot& hi = *it;
            const Knot& lo = *std::prev(it);
            const double u = (std::log(t) - std::log(lo.t)) / (std::log(hi.t) - std::log(lo.t));
            return std::exp((1.0 - u) * std::log(lo.q) + u * std::log(hi.q));
        }
    }
    throw std::logic_error("unreachable weight family");
}

double WeightFunction::eval(double t) const {
    check_domain(t);
    const double q = scale_ * eval_unscaled(t);
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw std::runtime_error("weight " + id_ + " is not positive-finite at t=" +
                                 std::to_string(t));
    }
    return q;
}

double WeightFunction::squared_over_t(double t) const {
    if (!(t > 0.0) || t > 1.0) throw std::domain_error("squared_over_t needs t in (0,1]");
    const double s2 = scale_ * scale_;
    switch (family_) {
        case Family::Power:
            // q^2/t = t^(2nu-1); exact when 2nu-1 = 0.
            return s2 * std::pow(t, 2.0 * param_ - 1.0);
        case Family::SqrtLogLog:
            return s2 * param_ * guarded_log(guarded_log(1.0 / t));
        case Family::SqrtLog:
            return s2 * param_ * guarded_log(1.0 / t);
        case Family::Constant:
            return s2 * param_ * param_ / t;
        case Family::Custom: {
            const double q = scale_ * eval_unscaled(t);
            return q * q / t;
        }
    }
    throw std::logic_error("unreachable weight family");
}

WeightFunction WeightFunction::scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("weight scale must be positive");
    WeightFunction w(*this);
    w.scale_ *= lambda;
    w.id_ = format_param(w.scale_) + "*" + id_;
    return w;
}

ValidationReport validate_class_q(const WeightFunction& w, int grid_size) {
    if (grid_size < 2) throw std::domain_error("validate_class_q needs grid_size >= 2");
    constexpr double kTMin = 1e-12;
    ValidationReport rep;

    const double lmin = std::log(kTMin);
    std::vector<double> grid(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        grid[static_cast<std::size_t>(i)] = std::exp(lmin * (1.0 - double(i) / (grid_size - 1)));
    }

    double prev_q = -1.0;
    bool prev_in_monotone = false;
    for (double t : grid) {
        double q;
        try {
            q = w.eval(t);
        } catch (const std::exception& e) {
            rep.positive = false;
            rep.violations.push_back("evaluation failed at t=" + std::to_string(t) + ": " +
                                     e.what());
            prev_in_monotone = false;
            continue;
        }
        if (!(q > 0.0)) {
            rep.positive = false;
            rep.violations.push_back("q(t) <= 0 at t=" + std::to_string(t));
        }
        const bool in_monotone = t <= w.monotone_delta();
        if (in_monotone && prev_in_monotone && q < prev_q * (1.0 - 1e-12)) {
            rep.monotone = false;
            rep.violations.push_back("q decreasing inside (0, monotone_delta] near t=" +
                                     std::to_string(t));
        }
        prev_q = q;
        prev_in_monotone = in_monotone;
    }

    const std::size_t head = std::min<std::size_t>(4, grid.size());
    for (std::size_t i = 0; i < head; ++i) {
        const double t = grid[i];
        rep.sqrt_t_over_q_head.emplace_back(t, std::sqrt(t) / w.eval(t));
    }
    return rep;
}

}  // namespace snlab::weights
