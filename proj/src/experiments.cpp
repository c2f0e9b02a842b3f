#include "snlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "snlab/criterion.hpp"
#include "snlab/parallel.hpp"

namespace snlab::experiments {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string trend_hint(const std::vector<ConvergenceRow>& rows) {
    bool nonincreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ks_to_limit > rows[i - 1].ks_to_limit + 0.01) nonincreasing = false;
    }
    std::ostringstream os;
    os << (nonincreasing ? "ks nonincreasing (0.01 slack)" : "ks trend broken");
    if (!rows.empty()) os << ", final ks=" << rows.back().ks_to_limit;
    return os.str();
}

ConvergenceReport convergence_impl(const models::DistributionModel& model,
                                   const weights::WeightFunction& weight,
                                   processes::FunctionalSpec base_spec,
                                   std::span<const std::uint64_t> ns, const RunOptions& opts,
                                   TauRule tau_rule, double tau_fixed,
                                   const stats::EmpiricalDistribution& limit,
                                   std::string_view tag) {
    for (std::size_t i = 1; i < ns.size(); ++i) {
        if (ns[i] <= ns[i - 1]) throw std::invalid_argument("ns must be strictly increasing");
    }
    ConvergenceReport report;
    for (std::uint64_t n : ns) {
        processes::FunctionalSpec spec = base_spec;
        if (spec.kind == processes::FunctionalKind::WeightedSup) {
            spec.tau = resolve_tau(tau_rule, tau_fixed, n);
        }
        if (spec.norm.mode == processes::Normalization::Mode::ByBn) {
            spec.norm.b_n = norming_constant(model, n);
        }
        SampleResult res = functional_samples(model, weight, spec, n, opts, tag);
        ConvergenceRow row;
        row.n = n;
        row.replicates = res.dist.count();
        row.ks_to_limit = stats::ks_distance(res.dist, limit);
        row.median = res.dist.median();
        row.iqr = res.dist.iqr();
        report.degenerate_total += res.degenerate_count;
        report.rows.push_back(row);
    }
    report.verdict_hint = trend_hint(report.rows);
    return report;
}

}  // namespace

double resolve_tau(TauRule rule, double fixed_value, std::uint64_t n) {
    switch (rule) {
        case TauRule::Fixed:
            if (!(fixed_value >= 0.0) || fixed_value >= 1.0) {
                throw std::domain_error("fixed tau must lie in [0,1)");
            }
            return fixed_value;
        case TauRule::OneOverLogN:
            return 1.0 / std::log(double(std::max<std::uint64_t>(n, 3)));
        case TauRule::OneOverN:
            return 1.0 / double(n);
    }
    throw std::logic_error("unreachable tau rule");
}

double norming_constant(const models::DistributionModel& model, std::uint64_t n) {
    return std::sqrt(double(n) * model.truncated_second_moment(model.eta(n)));
}

SampleResult functional_samples(const models::DistributionModel& model,
                                const weights::WeightFunction& weight,
                                processes::FunctionalSpec spec, std::uint64_t n,
                                const RunOptions& opts, std::string_view experiment_id) {
    if (n < 1) throw std::domain_error("functional_samples needs n >= 1");
    if (opts.replicates < 1) throw std::domain_error("need at least one replicate");

    const processes::FunctionalEvaluator eval(weight, spec, n);
    const std::string tag = std::string(experiment_id) + "#n=" + std::to_string(n);

    std::vector<double> values(opts.replicates);
    std::vector<unsigned char> degenerate(opts.replicates, 0);
    detail::parallel_for(opts.replicates, opts.threads, [&](std::uint64_t i) {
        rng::Rng gen = rng::Rng::for_replicate(opts.seed, tag, i);
        std::vector<double> increments(n);
        for (double& x : increments) x = model.sample_one(gen);
        try {
            values[i] = eval(increments);
        } catch (const processes::DegeneratePathError&) {
            degenerate[i] = 1;
        } catch (const processes::StudentDegenerateError&) {
            degenerate[i] = 1;
        }
    });

    std::vector<double> kept;
    kept.reserve(values.size());
    std::uint64_t dropped = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (degenerate[i]) {
            ++dropped;
        } else {
            kept.push_back(values[i]);
        }
    }
    if (kept.empty()) throw std::runtime_error("all replicates degenerate");

    stats::Meta meta;
    meta.model = model.id();
    meta.weight = weight.id();
    if (spec.kind == processes::FunctionalKind::WeightedSup) {
        meta.functional = "sup";
        meta.extra["tau"] = fmt(spec.tau);
    } else {
        meta.functional = "lp:" + fmt(spec.p);
    }
    switch (spec.norm.mode) {
        case processes::Normalization::Mode::BySelf:
            meta.extra["normalization"] = "self";
            break;
        case processes::Normalization::Mode::ByStudent:
            meta.extra["normalization"] = "student";
            break;
        case processes::Normalization::Mode::ByBn:
            meta.extra["normalization"] = "bn";
            meta.extra["b_n"] = fmt(spec.norm.b_n);
            break;
    }
    meta.n = n;
    meta.seed = opts.seed;
    meta.replicates = opts.replicates;
    if (dropped > 0) meta.extra["degenerate"] = std::to_string(dropped);

    return SampleResult{stats::EmpiricalDistribution(std::move(kept), std::move(meta)), dropped};
}

ConvergenceReport run_functional_convergence(
    const models::DistributionModel& model, const weights::WeightFunction& weight,
    processes::FunctionalKind kind, processes::Normalization::Mode mode,
    std::span<const std::uint64_t> ns, const RunOptions& opts, TauRule tau_rule,
    double tau_fixed, double p, const stats::EmpiricalDistribution& limit) {
    const auto verdict = criterion::classify_criterion(weight);
    if (verdict.kind == criterion::VerdictKind::Divergent) {
        throw wiener::LimitRefusal(
            "functional convergence needs I(q,c) < infinity for some c; weight " + weight.id() +
            " is Divergent");
    }
    processes::FunctionalSpec spec;
    spec.kind = kind;
    spec.p = p;
    spec.norm.mode = mode;
    // Tag excludes the normalization so BySelf/ByBn/ByStudent runs pair up
    // path-by-path under a common seed.
    const std::string tag = "conv:" + model.id() + ":" + weight.id() + ":" +
                            (kind == processes::FunctionalKind::WeightedSup ? "sup" : "lp");
    return convergence_impl(model, weight, spec, ns, opts, tau_rule, tau_fixed, limit, tag);
}

std::vector<std::pair<std::uint64_t, double>> run_vn_bn_concentration(
    const models::DistributionModel& model, std::span<const std::uint64_t> ns,
    const RunOptions& opts, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
    std::vector<std::pair<std::uint64_t, double>> out;
    for (std::uint64_t n : ns) {
        const double b2 = double(n) * model.truncated_second_moment(model.eta(n));
        const std::string tag = "vnbn:" + model.id() + "#n=" + std::to_string(n);
        std::vector<unsigned char> hit(opts.replicates, 0);
        detail::parallel_for(opts.replicates, opts.threads, [&](std::uint64_t i) {
            rng::Rng gen = rng::Rng::for_replicate(opts.seed, tag, i);
            double v2 = 0.0;
            for (std::uint64_t k = 0; k < n; ++k) {
                const double x = model.sample_one(gen);
                v2 += x * x;
            }
            hit[i] = std::abs(v2 / b2 - 1.0) <= eps ? 1 : 0;
        });
        std::uint64_t count = 0;
        for (unsigned char h : hit) count += h;
        out.emplace_back(n, double(count) / double(opts.replicates));
    }
    return out;
}

std::vector<std::pair<std::uint64_t, double>> run_ad188_check(
    const models::DistributionModel& model, std::span<const std::uint64_t> ns) {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (std::uint64_t n : ns) out.emplace_back(n, model.renorm_dispersion(n));
    return out;
}

CounterexampleReport run_counterexample(std::span<const std::uint64_t> ns,
                                        const RunOptions& opts) {
    CounterexampleReport rep;
    const auto loglog = weights::WeightFunction::sqrt_log_log(1.0);
    const auto contrast = weights::WeightFunction::sqrt_log(1.0);
    const auto svt = models::DistributionModel::slow_vary_tail(0.5);
    const double alpha = 0.5;

    wiener::LimitOptions wopts;
    wopts.seed = opts.seed;
    wopts.replicates = opts.replicates;
    wopts.threads = opts.threads;

    for (std::uint64_t n : ns) {
        rep.ns.push_back(n);
        const auto sup_ll = wiener::window_sup_functional(loglog, n, wopts);
        const auto sup_sl = wiener::window_sup_functional(contrast, n, wopts);
        rep.p_loglog.push_back(sup_ll.tail_fraction_above(rep.threshold));
        rep.p_contrast.push_back(sup_sl.tail_fraction_above(rep.threshold));
        rep.lower_bound.push_back(wiener::divergence_lower_bound(double(n)));

        // l(eta_j) is nondecreasing in j (eta_j nondecreasing, l nondecreasing),
        // so the max over j <= sqrt(n) sits at j = floor(sqrt(n)).
        const auto j_half = static_cast<std::uint64_t>(std::floor(std::sqrt(double(n))));
        const double l_half = svt.truncated_second_moment(svt.eta(j_half));
        const double l_full = svt.truncated_second_moment(svt.eta(n));
        rep.l_ratio.push_back(l_half / l_full);
        rep.l_ratio_bound.push_back(
            2.0 * std::exp((std::pow(0.3, alpha) - std::pow(0.5, alpha)) *
                           std::pow(std::log(double(n)), alpha)));
    }
    return rep;
}

ConvergenceReport run_lp_convergence(const models::DistributionModel& model,
                                     const weights::WeightFunction& weight, double p,
                                     std::span<const std::uint64_t> ns, const RunOptions& opts,
                                     const stats::EmpiricalDistribution& limit) {
    if (criterion::lp_criterion(weight, p) == criterion::LpVerdict::Infinite) {
        throw wiener::LimitRefusal("L_p convergence needs int t^{p/2}/q(t) dt < infinity; weight " +
                                   weight.id() + " fails it for p=" + fmt(p));
    }
    processes::FunctionalSpec spec;
    spec.kind = processes::FunctionalKind::WeightedLp;
    spec.p = p;
    spec.norm.mode = processes::Normalization::Mode::BySelf;
    const std::string tag = "conv:" + model.id() + ":" + weight.id() + ":lp";
    return convergence_impl(model, weight, spec, ns, opts, TauRule::OneOverN, 0.0, limit, tag);
}

}  // namespace snlab::experiments
