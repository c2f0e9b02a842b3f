#include "snlab/dan_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace snlab::models {

namespace {

constexpr double kSMax = 1e30;          // bracketing guard for eta
constexpr double kEtaRelTol = 1e-12;    // bisection tolerance
constexpr double kCondSlack = 1e-12;    // relative slack on l(s)/s^2 <= 1/j

double normal_pdf(double x) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// 2 * (1 - Phi(x)) for x >= 0.
double two_tail(double x) { return std::erfc(x * 0.70710678118654752440084436210485); }

}  // namespace

DistributionModel DistributionModel::rademacher() {
    DistributionModel m;
    m.family_ = ModelFamily::Rademacher;
    m.id_ = "rademacher";
    m.atom_x_ = {1.0};
    m.atom_p_ = {1.0};
    m.atom_cum_l_ = {1.0};
    m.atom_cum_p_ = {1.0};
    m.mass_at_zero_ = 0.0;
    m.b_ = 1.0;
    return m;
}

DistributionModel DistributionModel::standard_normal() {
    DistributionModel m;
    m.family_ = ModelFamily::StandardNormal;
    m.id_ = "normal";
    m.b_ = 1.0;
    return m;
}

DistributionModel DistributionModel::uniform_sym(double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("uniform half_width must be positive");
    DistributionModel m;
    m.family_ = ModelFamily::UniformSym;
    m.param_ = half_width;
    std::ostringstream os;
    os << "uniform:" << half_width;
    m.id_ = os.str();
    m.b_ = 1.0;
    return m;
}

DistributionModel DistributionModel::slow_vary_tail(double alpha, double grid_ratio, int k_max) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("slow_vary_tail needs alpha in (0,1)");
    }
    if (!(grid_ratio > 1.0)) throw std::invalid_argument("slow_vary_tail needs grid_ratio > 1");
    if (k_max < 1) throw std::invalid_argument("slow_vary_tail needs k_max >= 1");

    DistributionModel m;
    m.family_ = ModelFamily::SlowVaryTail;
    m.param_ = alpha;
    std::ostringstream os;
    os << "slowvary:" << alpha;
    m.id_ = os.str();

    // Atom at x_k = ratio^k carries the increment of the target
    // L(x) = exp((log x)^alpha) over (x_{k-1}, x_k], scaled by x_k^{-2},
    // so that l(x_k) = L(x_k) - L(1) exactly (telescoping sum).
    const auto target = [alpha](double x) { return std::exp(std::pow(std::log(x), alpha)); };
    double prev_l_target = 1.0;  // L(1)
    double cum_p = 0.0, cum_l = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double x = std::pow(grid_ratio, double(k));
        const double lt = target(x);
        const double p = std::max(0.0, (lt - prev_l_target) / (x * x));
        prev_l_target = lt;
        cum_p += p;
        cum_l += p * x * x;
        m.atom_x_.push_back(x);
        m.atom_p_.push_back(p);
        m.atom_cum_p_.push_back(cum_p);
        m.atom_cum_l_.push_back(cum_l);
    }
    if (cum_p > 1.0) {
        throw std::invalid_argument("slow_vary_tail atom mass exceeds 1 (k_max too large)");
    }
    m.mass_at_zero_ = 1.0 - cum_p;
    m.b_ = m.atom_x_.front();
    return m;
}

DistributionModel DistributionModel::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string head(spec.substr(0, colon));
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            std::size_t pos = 0;
            args.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("bad model parameter '" + tok + "'");
        }
    }
    if (head == "rademacher") return rademacher();
    if (head == "normal") return standard_normal();
    if (head == "uniform") {
        if (args.size() != 1) throw std::invalid_argument("uniform spec needs one parameter");
        return uniform_sym(args[0]);
    }
    if (head == "slowvary") {
        if (args.empty() || args.size() > 3) {
            throw std::invalid_argument("slowvary spec takes alpha[:ratio[:k_max]]");
        }
        const double ratio = args.size() > 1 ? args[1] : 2.0;
        const int kmax = args.size() > 2 ? static_cast<int>(args[2]) : 64;
        return slow_vary_tail(args[0], ratio, kmax);
    }
    throw std::invalid_argument("unknown model '" + head + "'");
}

double DistributionModel::sample_one(rng::Rng& gen) const {
    switch (family_) {
        case ModelFamily::Rademacher:
            return double(gen.rademacher());
        case ModelFamily::StandardNormal:
            return gen.normal();
        case ModelFamily::UniformSym:
            return param_ * (2.0 * gen.uniform01() - 1.0);
        case ModelFamily::SlowVaryTail: {
            const double u = gen.uniform01();
            if (u >= atom_cum_p_.back()) return 0.0;
            const auto it = std::upper_bound(atom_cum_p_.begin(), atom_cum_p_.end(), u);
            const auto k = static_cast<std::size_t>(it - atom_cum_p_.begin());
            return double(gen.rademacher()) * atom_x_[k];
        }
    }
    throw std::logic_error("unreachable model family");
}

std::vector<double> DistributionModel::sample(rng::Rng& gen, std::size_t m) const {
    if (m < 1) throw std::invalid_argument("sample size must be >= 1");
    std::vector<double> out(m);
    for (double& v : out) v = sample_one(gen);
    return out;
}

double DistributionModel::truncated_second_moment(double x) const {
    if (x < 0.0) throw std::domain_error("truncated_second_moment needs x >= 0");
    switch (family_) {
        case ModelFamily::Rademacher:
        case ModelFamily::SlowVaryTail: {
            const auto it = std::upper_bound(atom_x_.begin(), atom_x_.end(), x);
            if (it == atom_x_.begin()) return 0.0;
            return atom_cum_l_[static_cast<std::size_t>(it - atom_x_.begin()) - 1];
        }
        case ModelFamily::StandardNormal:
            // E X^2 1{|X|<=x} = 1 - 2x phi(x) - 2(1 - Phi(x))
            return 1.0 - 2.0 * x * normal_pdf(x) - two_tail(x);
        case ModelFamily::UniformSym: {
            const double h = param_;
            if (x >= h) return h * h / 3.0;
            return x * x * x / (3.0 * h);
        }
    }
    throw std::logic_error("unreachable model family");
}

double DistributionModel::eta_discrete(std::uint64_t j) const {
    const double s0 = b_ + 1.0;
    const double inv_j = 1.0 / double(j);
    // Block scan: l is constant between atoms, so within a block the
    // condition l/s^2 <= 1/j first holds at s = sqrt(j l). The condition is
    // not persistent across blocks (l jumps up), hence the scan from below.
    auto it = std::upper_bound(atom_x_.begin(), atom_x_.end(), s0);
    std::size_t k = it == atom_x_.begin() ? 0 : static_cast<std::size_t>(it - atom_x_.begin()) - 1;
    for (; k < atom_x_.size(); ++k) {
        const double blo = std::max(s0, atom_x_[k]);
        const double bhi =
            k + 1 < atom_x_.size() ? atom_x_[k + 1] : std::numeric_limits<double>::infinity();
        const double lk = atom_cum_l_[k];
        if (lk <= 0.0) continue;
        const double cand = std::max(blo, std::sqrt(double(j) * lk));
        if (cand < bhi && lk / (cand * cand) <= inv_j * (1.0 + kCondSlack)) return cand;
    }
    throw std::runtime_error("eta: no block admits the condition (model " + id_ + ")");
}

double DistributionModel::eta_continuous(std::uint64_t j, double lower_hint) const {
    const double s0 = b_ + 1.0;
    const double inv_j = 1.0 / double(j);
    const auto cond = [&](double s) {
        return truncated_second_moment(s) / (s * s) <= inv_j * (1.0 + kCondSlack);
    };
    double lo = std::max(s0, lower_hint);
    if (cond(lo)) return lo;  // in particular eta_j = b+1 when satisfied there
    double hi = 2.0 * lo;
    while (!cond(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > kSMax) {
            throw std::runtime_error("eta: no bracket below s_max for model " + id_);
        }
    }
    while (hi - lo > kEtaRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        (cond(mid) ? hi : lo) = mid;
    }
    return hi;  // upper endpoint: the inf is attained from the right
}

double DistributionModel::eta(std::uint64_t j, double lower_hint) const {
    if (j < 1) throw std::domain_error("eta needs j >= 1");
    switch (family_) {
        case ModelFamily::Rademacher:
        case ModelFamily::SlowVaryTail:
            return eta_discrete(j);
        case ModelFamily::StandardNormal:
        case ModelFamily::UniformSym:
            return eta_continuous(j, lower_hint);
    }
    throw std::logic_error("unreachable model family");
}

double DistributionModel::sigma_star(std::uint64_t j) const {
    // Symmetric models: E X 1{|X|<=eta} = 0, so Var = l(eta_j).
    return std::sqrt(truncated_second_moment(eta(j)));
}

NormingTable DistributionModel::norming_table(std::span<const std::uint64_t> js) const {
    if (js.empty()) throw std::invalid_argument("norming_table needs nonempty js");
    for (std::size_t i = 1; i < js.size(); ++i) {
        if (js[i] <= js[i - 1]) throw std::invalid_argument("norming_table js must increase");
    }
    NormingTable table;
    table.model_id = id_;
    double hint = 0.0;
    for (std::uint64_t j : js) {
        NormingRow row;
        row.j = j;
        row.eta = eta(j, hint);
        hint = row.eta;
        row.l_eta = truncated_second_moment(row.eta);
        row.b_squared = double(j) * row.l_eta;
        row.sigma_star = std::sqrt(row.l_eta);
        table.rows.push_back(row);
    }
    return table;
}

double DistributionModel::renorm_dispersion(std::uint64_t n) const {
    if (n < 1) throw std::domain_error("renorm_dispersion needs n >= 1");
    std::vector<double> l_eta(n);
    double hint = 0.0;
    for (std::uint64_t j = 1; j <= n; ++j) {
        const double e = eta(j, hint);
        hint = e;
        l_eta[j - 1] = truncated_second_moment(e);
    }
    const double root_l_n = std::sqrt(l_eta[n - 1]);
    double acc = 0.0;
    for (double l : l_eta) {
        const double d = std::sqrt(l) / root_l_n - 1.0;
        acc += d * d;
    }
    return acc / double(n);
}

}  // namespace snlab::models
