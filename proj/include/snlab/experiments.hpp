#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snlab/dan_models.hpp"
#include "snlab/empirical.hpp"
#include "snlab/processes.hpp"
#include "snlab/weights.hpp"
#include "snlab/wiener.hpp"

namespace snlab::experiments {

enum class TauRule { Fixed, OneOverLogN, OneOverN };

double resolve_tau(TauRule rule, double fixed_value, std::uint64_t n);

struct RunOptions {
    std::uint64_t seed = 0;
    std::uint64_t replicates = 2000;
    int threads = 1;
};

// b_n = sqrt(n l(eta_n)) for the given model.
double norming_constant(const models::DistributionModel& model, std::uint64_t n);

struct SampleResult {
    stats::EmpiricalDistribution dist;
    std::uint64_t degenerate_count = 0;
};

// Replicate functional samples for one (model, weight, spec, n). Replicate i
// draws from Rng::for_replicate(seed, experiment_id + "#n=<n>", i), so results
// are identical for any worker count, and runs sharing an experiment_id are
// path-coupled across normalizations. Degenerate paths (V_n = 0, or the
// Student corner) are dropped from the sample and counted.
SampleResult functional_samples(const models::DistributionModel& model,
                                const weights::WeightFunction& weight,
                                processes::FunctionalSpec spec, std::uint64_t n,
                                const RunOptions& opts, std::string_view experiment_id);

struct ConvergenceRow {
    std::uint64_t n = 0;
    std::uint64_t replicates = 0;
    double ks_to_limit = 0.0;
    double median = 0.0;
    double iqr = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::string verdict_hint;  // monotone-trend summary of the ks column
    std::uint64_t degenerate_total = 0;
};

// Donsker-type experiment: per n, sample the weighted functional of the
// normalized partial-sum process and report the two-sample KS distance to
// the provided Wiener limit sample. Refuses Divergent weights.
ConvergenceReport run_functional_convergence(
    const models::DistributionModel& model, const weights::WeightFunction& weight,
    processes::FunctionalKind kind, processes::Normalization::Mode mode,
    std::span<const std::uint64_t> ns, const RunOptions& opts, TauRule tau_rule,
    double tau_fixed, double p, const stats::EmpiricalDistribution& limit);

// Fractions of replicates with |V_n^2/b_n^2 - 1| <= eps, one row per n.
std::vector<std::pair<std::uint64_t, double>> run_vn_bn_concentration(
    const models::DistributionModel& model, std::span<const std::uint64_t> ns,
    const RunOptions& opts, double eps);

// The deterministic renormalized-dispersion sequence, one row per n.
std::vector<std::pair<std::uint64_t, double>> run_ad188_check(
    const models::DistributionModel& model, std::span<const std::uint64_t> ns);

struct CounterexampleReport {
    std::vector<std::uint64_t> ns;
    double threshold = 0.25;            // epsilon^{1/2}/2 with epsilon = 1/4
    std::vector<double> p_loglog;       // P(window sup > threshold), q^2 = t loglog(1/t)
    std::vector<double> p_contrast;     // same window sup with q = sqrtlog(1)
    std::vector<double> lower_bound;    // the divergence lower-bound integral
    std::vector<double> l_ratio;        // max_{j<=sqrt n} l(eta_j)/l(eta_n), SlowVaryTail(0.5)
    std::vector<double> l_ratio_bound;  // 2 exp[(0.3^a - 0.5^a)(log n)^a]
};

CounterexampleReport run_counterexample(std::span<const std::uint64_t> ns,
                                        const RunOptions& opts);

// L_p version of the convergence experiment; refuses Infinite criteria.
ConvergenceReport run_lp_convergence(const models::DistributionModel& model,
                                     const weights::WeightFunction& weight, double p,
                                     std::span<const std::uint64_t> ns, const RunOptions& opts,
                                     const stats::EmpiricalDistribution& limit);

}  // namespace snlab::experiments
