#include "snlab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snlab/quadrature.hpp"

namespace snlab::criterion {

namespace {

constexpr double kLog2 = 0.693147180559945309417232121458176568;
constexpr double kBlockFloor = 1e-300;  // below this a tail is numerically zero
constexpr int kTailWindow = 5;

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

double ls_rss(const std::vector<double>& x, const std::vector<double>& y, double slope) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (y[i] - my) - slope * (x[i] - mx);
        rss += r * r;
    }
    return rss;
}

// Fitted geometric ratio over the last kTailWindow blocks, or nullopt when
// a block in the window is at the numeric floor.
std::optional<double> window_ratio(const std::vector<double>& blocks) {
    const std::size_t n = blocks.size();
    double acc = 0.0;
    for (std::size_t i = n - kTailWindow; i + 1 < n; ++i) {
        if (blocks[i] <= kBlockFloor || blocks[i + 1] <= kBlockFloor) return std::nullopt;
        acc += std::log(blocks[i + 1] / blocks[i]);
    }
    return std::exp(acc / (kTailWindow - 1));
}

// Distinguishes geometric decay (rho^k) from polynomial decay (k^-s) on the
// deeper half of the block sequence, and decides summability accordingly.
TailDecision shape_decision(const std::vector<double>& blocks) {
    const int depth = static_cast<int>(blocks.size()) - 1;
    std::vector<double> ks, logk, y;
    for (int k = depth / 2; k <= depth; ++k) {
        const double b = blocks[static_cast<std::size_t>(k)];
        if (b <= kBlockFloor) return TailDecision::Summable;
        ks.push_back(double(k));
        logk.push_back(std::log(double(k)));
        y.push_back(std::log(b));
    }
    if (ks.size() < 4) return TailDecision::Inconclusive;

    const double b_geo = ls_slope(ks, y);
    const double rss_geo = ls_rss(ks, y, b_geo);
    const double b_poly = ls_slope(logk, y);
    const double rss_poly = ls_rss(logk, y, b_poly);

    // A fit this bad means the blocks follow neither model; surface it.
    const double worst_rms = std::sqrt(std::min(rss_geo, rss_poly) / double(ks.size()));
    if (worst_rms > 0.5) return TailDecision::Inconclusive;

    if (rss_geo <= rss_poly) {
        // log B linear in k: geometric tail with ratio e^b.
        if (b_geo < -1e-6) return TailDecision::Summable;
        return TailDecision::Divergent;
    }
    // log B linear in log k: blocks ~ k^{-s}, summable iff s > 1.
    const double s = -b_poly;
    return s > 1.0 ? TailDecision::Summable : TailDecision::Divergent;
}

std::vector<double> blocks_generic(double c, int max_depth,
                                   const weights::WeightFunction& w, double p, bool lp_mode) {
    if (max_depth < 4) throw std::domain_error("max_depth must be >= 4");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_depth) + 1);
    for (int k = 0; k <= max_depth; ++k) {
        const double val = quadrature::gl32(0.0, 1.0, [&](double u) {
            const double t = std::exp2(-(k + u));
            if (lp_mode) {
                // integrand of int t^{p/2}/q dt after t = 2^{-k-u}
                return std::pow(t, 1.0 + 0.5 * p) / w.eval(t);
            }
            const double expo = c * w.squared_over_t(t);
            return expo > 745.0 ? 0.0 : std::exp(-expo);
        });
        out.push_back(kLog2 * val);
    }
    return out;
}

TailDecision decide_with_escalation(const weights::WeightFunction& w, double c, int max_depth,
                                    double tail_tol, double p, bool lp_mode,
                                    std::vector<double>* keep_blocks) {
    auto decide_plain = [&](const std::vector<double>& blocks) -> std::optional<TailDecision> {
        bool floored = false;
        for (std::size_t i = blocks.size() - kTailWindow; i < blocks.size(); ++i) {
            if (blocks[i] <= kBlockFloor) floored = true;
        }
        if (floored) return TailDecision::Summable;
        if (const auto ratio = window_ratio(blocks); ratio && *ratio < 1.0 - tail_tol) {
            return TailDecision::Summable;
        }
        return std::nullopt;
    };

    std::vector<double> blocks = blocks_generic(c, max_depth, w, p, lp_mode);
    if (auto d = decide_plain(blocks)) {
        if (keep_blocks) *keep_blocks = std::move(blocks);
        return *d;
    }
    // Escalate once: double the depth, retry the ratio test, then fall back
    // to shape discrimination between geometric and polynomial decay.
    blocks = blocks_generic(c, 2 * max_depth, w, p, lp_mode);
    TailDecision result;
    if (auto d = decide_plain(blocks)) {
        result = *d;
    } else {
        result = shape_decision(blocks);
    }
    if (keep_blocks) *keep_blocks = std::move(blocks);
    return result;
}

}  // namespace

std::vector<double> default_c_grid() {
    std::vector<double> grid;
    for (int i = -4; i <= 4; ++i) grid.push_back(std::pow(10.0, 0.5 * i));
    return grid;
}

std::vector<double> integral_blocks(const weights::WeightFunction& w, double c, int max_depth) {
    if (!(c > 0.0)) throw std::domain_error("integral_blocks needs c > 0");
    return blocks_generic(c, max_depth, w, 0.0, false);
}

TailDecision tail_decision(const std::vector<double>& blocks, double tail_tol) {
    if (blocks.size() < kTailWindow + 1) throw std::domain_error("too few blocks");
    for (std::size_t i = blocks.size() - kTailWindow; i < blocks.size(); ++i) {
        if (blocks[i] <= kBlockFloor) return TailDecision::Summable;
    }
    if (const auto ratio = window_ratio(blocks); ratio && *ratio < 1.0 - tail_tol) {
        return TailDecision::Summable;
    }
    return shape_decision(blocks);
}

CriterionVerdict classify_criterion(const weights::WeightFunction& w, std::vector<double> c_grid,
                                    int max_depth, double tail_tol) {
    if (c_grid.empty()) c_grid = default_c_grid();
    if (!(tail_tol > 0.0)) throw std::domain_error("tail_tol must be positive");
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        if (!(c_grid[i] > 0.0)) throw std::domain_error("c grid values must be positive");
        if (i > 0 && !(c_grid[i] > c_grid[i - 1])) {
            throw std::domain_error("c grid must be strictly increasing");
        }
    }

    CriterionVerdict verdict;
    verdict.max_depth = max_depth;
    for (double c : c_grid) {
        PerC pc;
        pc.c = c;
        pc.tail = decide_with_escalation(w, c, max_depth, tail_tol, 0.0, false, &pc.blocks);
        if (pc.tail == TailDecision::Inconclusive) verdict.inconclusive_c.push_back(c);
        verdict.per_c.push_back(std::move(pc));
    }

    const bool all_summable =
        std::all_of(verdict.per_c.begin(), verdict.per_c.end(),
                    [](const PerC& p) { return p.tail == TailDecision::Summable; });
    const bool none_summable =
        std::none_of(verdict.per_c.begin(), verdict.per_c.end(),
                     [](const PerC& p) { return p.tail == TailDecision::Summable; });

    if (all_summable) {
        verdict.kind = VerdictKind::AllC;
        return verdict;
    }
    if (none_summable) {
        verdict.kind = VerdictKind::Divergent;
        return verdict;
    }

    verdict.kind = VerdictKind::SomeC;
    // Bracket: smallest summable c against the largest non-summable below it.
    double hi = 0.0, lo = 0.0;
    for (const PerC& p : verdict.per_c) {
        if (p.tail == TailDecision::Summable) {
            hi = p.c;
            break;
        }
        lo = p.c;
    }
    if (lo > 0.0 && hi > lo) {
        for (int it = 0; it < 48 && hi / lo > 1.001; ++it) {
            const double mid = std::sqrt(lo * hi);
            const TailDecision d =
                decide_with_escalation(w, mid, max_depth, tail_tol, 0.0, false, nullptr);
            (d == TailDecision::Summable ? hi : lo) = mid;
        }
        verdict.c_threshold_estimate = std::sqrt(lo * hi);
    }
    return verdict;
}

LpVerdict lp_criterion(const weights::WeightFunction& w, double p, int max_depth,
                       double tail_tol) {
    if (!(p > 0.0)) throw std::domain_error("lp_criterion needs p > 0");
    const TailDecision d =
        decide_with_escalation(w, 0.0, max_depth, tail_tol, p, true, nullptr);
    // Inconclusive decays are not certified as integrable.
    return d == TailDecision::Summable ? LpVerdict::Finite : LpVerdict::Infinite;
}

}  // namespace snlab::criterion
