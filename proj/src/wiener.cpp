#include "snlab/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "snlab/parallel.hpp"
#include "snlab/quadrature.hpp"

namespace snlab::wiener {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::vector<double> weight_on_grid(const weights::WeightFunction& w,
                                   const std::vector<double>& times) {
    std::vector<double> q(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) q[i] = w.eval(times[i]);
    return q;
}

criterion::CriterionVerdict ensure_verdict(const weights::WeightFunction& w,
                                           const LimitOptions& opts) {
    if (opts.verdict) return *opts.verdict;
    return criterion::classify_criterion(w);
}

std::vector<double> sup_replicates(const weights::WeightFunction& w,
                                   const std::vector<double>& times, const LimitOptions& opts,
                                   const char* tag) {
    const std::vector<double> q = weight_on_grid(w, times);
    std::vector<double> dt(times.size());
    dt[0] = times[0];
    for (std::size_t i = 1; i < times.size(); ++i) dt[i] = times[i] - times[i - 1];

    std::vector<double> out(opts.replicates);
    detail::parallel_for(opts.replicates, opts.threads, [&](std::uint64_t i) {
        rng::Rng gen = rng::Rng::for_replicate(opts.seed, tag, i);
        double wt = 0.0, best = 0.0;
        for (std::size_t s = 0; s < times.size(); ++s) {
            wt += std::sqrt(dt[s]) * gen.normal();
            best = std::max(best, std::abs(wt) / q[s]);
        }
        out[i] = best;
    });
    return out;
}

}  // namespace

WienerGrid WienerGrid::make(int m, double r, double eps_floor) {
    if (m < 1) throw std::invalid_argument("wiener grid needs m >= 1");
    if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("wiener grid needs r in (0,1)");
    if (!(eps_floor > 0.0) || eps_floor >= 1.0) {
        throw std::invalid_argument("wiener grid needs eps_floor in (0,1)");
    }
    WienerGrid g;
    g.m = m;
    g.r = r;
    g.eps_floor = eps_floor;
    g.times.reserve(static_cast<std::size_t>(m) + 64);
    for (int k = 1; k <= m; ++k) g.times.push_back(double(k) / double(m));
    for (double x = r; x >= eps_floor; x *= r) g.times.push_back(x);
    std::sort(g.times.begin(), g.times.end());
    g.times.erase(std::unique(g.times.begin(), g.times.end()), g.times.end());
    return g;
}

WienerGrid WienerGrid::refined() const {
    return make(2 * m, std::sqrt(r), eps_floor);
}

std::vector<double> sample_wiener_path(const WienerGrid& grid, rng::Rng& gen) {
    std::vector<double> path(grid.times.size());
    double prev_t = 0.0, w = 0.0;
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        w += std::sqrt(grid.times[i] - prev_t) * gen.normal();
        prev_t = grid.times[i];
        path[i] = w;
    }
    return path;
}

stats::EmpiricalDistribution limit_sup_functional(const weights::WeightFunction& w,
                                                  const WienerGrid& grid,
                                                  const LimitOptions& opts) {
    const auto verdict = ensure_verdict(w, opts);
    if (verdict.kind == criterion::VerdictKind::Divergent) {
        throw LimitRefusal("weighted sup limit is a.s. infinite: I(q,c) diverges for all c (" +
                           w.id() + ")");
    }

    std::vector<double> samples = sup_replicates(w, grid.times, opts, "wiener-sup");

    stats::Meta meta;
    meta.model = "wiener";
    meta.weight = w.id();
    meta.functional = "sup";
    meta.seed = opts.seed;
    meta.replicates = opts.replicates;
    meta.extra["grid_m"] = std::to_string(grid.m);
    meta.extra["grid_r"] = fmt(grid.r);
    meta.extra["grid_eps"] = fmt(grid.eps_floor);
    meta.extra["grid_points"] = std::to_string(grid.times.size());

    if (opts.refinement_check) {
        const WienerGrid fine = grid.refined();
        std::vector<double> refined = sup_replicates(w, fine.times, opts, "wiener-sup");
        auto med = [](std::vector<double> v) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            return v[v.size() / 2];
        };
        const double m0 = med(samples), m1 = med(refined);
        const double shift = std::abs(m1 - m0) / std::max(1e-300, std::abs(m0));
        meta.extra["refinement_shift"] = fmt(shift);
        meta.extra["converged"] = shift < 0.005 ? "true" : "false";
    }
    return stats::EmpiricalDistribution(std::move(samples), std::move(meta));
}

stats::EmpiricalDistribution limit_lp_functional(const weights::WeightFunction& w, double p,
                                                 const WienerGrid& grid,
                                                 const LimitOptions& opts) {
    if (!(p > 0.0)) throw std::domain_error("limit_lp_functional needs p > 0");
    if (criterion::lp_criterion(w, p) == criterion::LpVerdict::Infinite) {
        throw LimitRefusal("L_p limit not integrable: int t^{p/2}/q(t) dt diverges (" + w.id() +
                           ")");
    }
    const std::vector<double>& ts = grid.times;
    const std::vector<double> q = weight_on_grid(w, ts);

    std::vector<double> out(opts.replicates);
    detail::parallel_for(opts.replicates, opts.threads, [&](std::uint64_t i) {
        rng::Rng gen = rng::Rng::for_replicate(opts.seed, "wiener-lp", i);
        double wt = 0.0, prev_t = 0.0, prev_f = 0.0, acc = 0.0;
        for (std::size_t s = 0; s < ts.size(); ++s) {
            wt += std::sqrt(ts[s] - prev_t) * gen.normal();
            const double f = std::pow(std::abs(wt), p) / q[s];
            if (s > 0) acc += 0.5 * (prev_f + f) * (ts[s] - prev_t);
            prev_t = ts[s];
            prev_f = f;
        }
        out[i] = acc;
    });

    stats::Meta meta;
    meta.model = "wiener";
    meta.weight = w.id();
    meta.functional = "lp:" + fmt(p);
    meta.seed = opts.seed;
    meta.replicates = opts.replicates;
    meta.extra["grid_m"] = std::to_string(grid.m);
    meta.extra["grid_points"] = std::to_string(ts.size());
    meta.extra["tail_bias_bound"] = fmt(lp_tail_bias_bound(w, p, grid.eps_floor));
    return stats::EmpiricalDistribution(std::move(out), std::move(meta));
}

std::vector<double> window_grid(std::uint64_t n, int pts_per_decade) {
    if (n < 4) throw std::domain_error("window grid needs n >= 4");
    const double lo = 1.0 / double(n);
    const double hi = 1.0 / std::sqrt(double(n));
    const double decades = std::log10(hi / lo);
    const int npts = std::max(2, int(std::ceil(pts_per_decade * decades)) + 1);
    std::vector<double> ts(static_cast<std::size_t>(npts));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < npts; ++i) {
        ts[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * double(i) / (npts - 1));
    }
    ts.front() = lo;
    ts.back() = hi;
    return ts;
}

stats::EmpiricalDistribution window_sup_functional(const weights::WeightFunction& w,
                                                   std::uint64_t n, const LimitOptions& opts) {
    const std::vector<double> ts = window_grid(n);
    std::vector<double> samples = sup_replicates(w, ts, opts, "wiener-window");

    stats::Meta meta;
    meta.model = "wiener";
    meta.weight = w.id();
    meta.functional = "window-sup";
    meta.n = n;
    meta.seed = opts.seed;
    meta.replicates = opts.replicates;
    meta.extra["window_lo"] = fmt(1.0 / double(n));
    meta.extra["window_hi"] = fmt(1.0 / std::sqrt(double(n)));
    meta.extra["grid_points"] = std::to_string(ts.size());
    return stats::EmpiricalDistribution(std::move(samples), std::move(meta));
}

double abs_normal_moment(double p) {
    if (!(p > 0.0)) throw std::domain_error("abs_normal_moment needs p > 0");
    return std::exp2(0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::sqrt(kPi);
}

double lp_tail_bias_bound(const weights::WeightFunction& w, double p, double eps) {
    const double mp = abs_normal_moment(p);
    double total = 0.0;
    double hi = eps;
    for (int k = 0; k < 400; ++k) {
        const double lo = 0.5 * hi;
        const double blk = quadrature::gl8(
            lo, hi, [&](double t) { return std::pow(t, 0.5 * p) / w.eval(t); });
        total += blk;
        if (blk < 1e-16 * total) break;
        hi = lo;
    }
    return mp * total;
}

double divergence_lower_bound(double n) {
    if (!(n > 1.0)) throw std::domain_error("divergence bound needs n > 1");
    // (1/4) int exp(-loglog(1/t)/2) dt/t, u = log(1/t) over [log sqrt n, log n]
    const double u_lo = 0.5 * std::log(n), u_hi = std::log(n);
    return 0.25 * quadrature::gl32(u_lo, u_hi, [](double u) {
        return std::exp(-0.5 * weights::guarded_log(u));
    });
}

double divergence_lower_bound_closed_form(double n) {
    return 0.5 * (1.0 - 1.0 / std::sqrt(2.0)) * std::sqrt(std::log(n));
}

}  // namespace snlab::wiener
