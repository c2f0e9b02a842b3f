#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "snlab/criterion.hpp"
#include "snlab/empirical.hpp"
#include "snlab/rng.hpp"
#include "snlab/weights.hpp"

namespace snlab::wiener {

// Refusal raised when a limit functional is almost surely infinite
// (weighted sup under a Divergent weight) or not integrable (L_p under
// an Infinite criterion).
struct LimitRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation grid on (0,1]: union of the uniform grid {k/m} and the
// geometric grid {r^j} down to eps_floor. The simulator only ever samples
// W on [0,1]; the scaling identity {n^{-1/2} W(nt)/q(t)} =_d {W(t)/q(t)}
// is why no n-dependent grid is needed.
struct WienerGrid {
    std::vector<double> times;  // strictly increasing, last = 1
    int m = 0;
    double r = 0.0;
    double eps_floor = 0.0;

    static WienerGrid make(int m = 4096, double r = 0.94, double eps_floor = 1e-10);

    // Doubled uniform resolution and doubled geometric density (r -> sqrt(r)).
    WienerGrid refined() const;
};

// W at the grid times via independent Gaussian increments:
// W(t_0) ~ N(0,t_0), W(t_{i+1}) = W(t_i) + N(0, t_{i+1}-t_i).
std::vector<double> sample_wiener_path(const WienerGrid& grid, rng::Rng& gen);

struct LimitOptions {
    std::uint64_t seed = 0;
    std::uint64_t replicates = 2000;
    int threads = 1;
    // When set, re-simulates on a refined grid and records the relative
    // median shift in meta ("refinement_shift", "converged").
    bool refinement_check = false;
    // Classification to reuse; classify_criterion(w) is run when absent.
    const criterion::CriterionVerdict* verdict = nullptr;
};

// Replicates of max over the grid of |W(t)|/q(t). Refuses Divergent weights:
// the limit is a.s. infinite for them.
stats::EmpiricalDistribution limit_sup_functional(const weights::WeightFunction& w,
                                                  const WienerGrid& grid,
                                                  const LimitOptions& opts);

// Replicates of the trapezoid integral of |W|^p/q over [eps_floor, 1].
// The (0, eps_floor) remainder is not simulated; an analytic bound on its
// mean is recorded in meta ("tail_bias_bound"). Refuses Infinite criteria.
stats::EmpiricalDistribution limit_lp_functional(const weights::WeightFunction& w, double p,
                                                 const WienerGrid& grid,
                                                 const LimitOptions& opts);

// Geometric grid over [1/n, 1/sqrt(n)] with >= pts_per_decade points per decade.
std::vector<double> window_grid(std::uint64_t n, int pts_per_decade = 64);

// Replicates of sup over [1/n, 1/sqrt(n)] of |W(t)|/q(t).
stats::EmpiricalDistribution window_sup_functional(const weights::WeightFunction& w,
                                                   std::uint64_t n, const LimitOptions& opts);

// E |N(0,1)|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
double abs_normal_moment(double p);

// Bound on E int_0^eps |W|^p/q dt, namely m_p int_0^eps t^{p/2}/q(t) dt.
double lp_tail_bias_bound(const weights::WeightFunction& w, double p, double eps);

// The counterexample's lower-bound integral at epsilon = 1/4:
// (1/4) int_{1/n}^{1/sqrt n} t^{-1} exp(-q^2(t)/(2t)) dt with
// q^2(t) = t loglog(1/t); closed form (1/2)(1 - 1/sqrt 2)(log n)^{1/2} once
// the window is inside the unclamped region.
double divergence_lower_bound(double n);
double divergence_lower_bound_closed_form(double n);

}  // namespace snlab::wiener
