#pragma once

#include <optional>
#include <vector>

#include "snlab/weights.hpp"

namespace snlab::criterion {

enum class TailDecision { Summable, Divergent, Inconclusive };

enum class VerdictKind { AllC, SomeC, Divergent };

struct PerC {
    double c = 0.0;
    std::vector<double> blocks;  // dyadic block integrals B_k, k = 0..depth
    TailDecision tail = TailDecision::Inconclusive;
};

// Outcome of classifying I(q,c) = int_0^1 t^{-1} exp(-c q^2(t)/t) dt over a
// grid of c values. AllC / Divergent mean "summable / non-summable tail at
// every tested c"; SomeC carries a bisection estimate of the threshold c*.
// Inconclusive tail decisions are surfaced, never silently absorbed.
struct CriterionVerdict {
    VerdictKind kind = VerdictKind::Divergent;
    std::optional<double> c_threshold_estimate;
    std::vector<PerC> per_c;
    int max_depth = 0;
    std::vector<double> inconclusive_c;
    bool inconclusive_present() const { return !inconclusive_c.empty(); }
};

// Geometric grid of 9 points spanning [1e-2, 1e2].
std::vector<double> default_c_grid();

// B_k = int_{2^{-(k+1)}}^{2^{-k}} t^{-1} exp(-c q^2(t)/t) dt for k=0..max_depth,
// each by 32-point Gauss-Legendre after the substitution t = 2^{-k-u}.
std::vector<double> integral_blocks(const weights::WeightFunction& w, double c, int max_depth);

// Tail summability of sum_k B_k given the blocks for one c. Exposed for tests.
TailDecision tail_decision(const std::vector<double>& blocks, double tail_tol);

CriterionVerdict classify_criterion(const weights::WeightFunction& w,
                                    std::vector<double> c_grid = {}, int max_depth = 60,
                                    double tail_tol = 0.05);

enum class LpVerdict { Finite, Infinite };

// Dyadic-block summability of int_0^1 t^{p/2} / q(t) dt.
LpVerdict lp_criterion(const weights::WeightFunction& w, double p, int max_depth = 60,
                       double tail_tol = 0.05);

}  // namespace snlab::criterion
