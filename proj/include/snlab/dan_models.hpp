#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snlab/rng.hpp"

namespace snlab::models {

enum class ModelFamily { Rademacher, StandardNormal, UniformSym, SlowVaryTail };

struct NormingRow {
    std::uint64_t j = 0;
    double eta = 0.0;
    double l_eta = 0.0;
    double b_squared = 0.0;   // j * l(eta_j)
    double sigma_star = 0.0;  // sqrt(Var(X 1{|X| <= eta_j}))
};

struct NormingTable {
    std::string model_id;
    std::vector<NormingRow> rows;
};

// A zero-mean distribution in the domain of attraction of the normal law.
// Exposes sampling, the truncated second moment l(x) = E X^2 1{|X|<=x}
// (exact closed/tabulated forms, no Monte Carlo), and the norming objects
// b, eta_j, b_n^2, sigma*_j.
//
// All built-ins are symmetric, so truncation never shifts the mean and
// sigma*_j^2 = l(eta_j) exactly.
class DistributionModel {
public:
    static DistributionModel rademacher();
    static DistributionModel standard_normal();
    static DistributionModel uniform_sym(double half_width);

    // The counterexample family: a symmetric discrete law whose truncated
    // second moment tracks exp((log x)^alpha), built on the atom grid
    // x_k = grid_ratio^k, k = 1..k_max, with the leftover mass at 0.
    static DistributionModel slow_vary_tail(double alpha, double grid_ratio = 2.0,
                                            int k_max = 64);

    // Parses "rademacher", "normal", "uniform:1", "slowvary:0.5".
    static DistributionModel parse(std::string_view spec);

    double sample_one(rng::Rng& gen) const;
    std::vector<double> sample(rng::Rng& gen, std::size_t m) const;

    // l(x) = E X^2 1{|X| <= x}; exact per family.
    double truncated_second_moment(double x) const;

    // b = inf{x >= 1 : l(x) > 0}.
    double atom_floor() const { return b_; }

    // eta_j = inf{s : s >= b+1, l(s)/s^2 <= 1/j}. Exact block scan for the
    // discrete families, bracketing + bisection to 1e-12 relative for the
    // continuous ones. `lower_hint` may carry eta_{j'} for some j' <= j.
    double eta(std::uint64_t j, double lower_hint = 0.0) const;

    double sigma_star(std::uint64_t j) const;

    NormingTable norming_table(std::span<const std::uint64_t> js) const;

    // The deterministic sequence (1/n) sum_{j<=n} (sigma*_j / sqrt(l(eta_n)) - 1)^2.
    double renorm_dispersion(std::uint64_t n) const;

    ModelFamily family() const { return family_; }
    const std::string& id() const { return id_; }
    bool symmetric() const { return true; }
    bool analytic_l() const { return true; }

    // SlowVaryTail internals, exposed for the norming/counterexample tests.
    std::span<const double> atom_positions() const { return atom_x_; }
    std::span<const double> atom_masses() const { return atom_p_; }
    double mass_at_zero() const { return mass_at_zero_; }

private:
    DistributionModel() = default;

    ModelFamily family_ = ModelFamily::Rademacher;
    double param_ = 0.0;  // half_width / alpha
    double b_ = 1.0;
    std::string id_;

    // SlowVaryTail atom table: P(X = +-atom_x_[k]) = atom_p_[k]/2.
    std::vector<double> atom_x_;
    std::vector<double> atom_p_;
    std::vector<double> atom_cum_l_;  // l at atom_x_[k]
    std::vector<double> atom_cum_p_;  // cumulative atom mass for sampling
    double mass_at_zero_ = 0.0;

    double eta_discrete(std::uint64_t j) const;
    double eta_continuous(std::uint64_t j, double lower_hint) const;
};

}  // namespace snlab::models
