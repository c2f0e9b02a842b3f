#include "snlab/config.hpp"

#include <algorithm>
#include <sstream>

namespace snlab::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

double parse_real(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

}  // namespace

std::vector<std::uint64_t> parse_n_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_u64(tok, 0));
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    bool seen_seed = false;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                             trim(raw) + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ParseError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        }

        if (key == "model") {
            cfg.model = value;
        } else if (key == "weight") {
            cfg.weight = value;
        } else if (key == "functional") {
            if (value == "sup") {
                cfg.kind = processes::FunctionalKind::WeightedSup;
            } else if (value == "lp") {
                cfg.kind = processes::FunctionalKind::WeightedLp;
            } else {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": functional must be 'sup' or 'lp'");
            }
        } else if (key == "p") {
            cfg.p = parse_real(value, lineno);
        } else if (key == "normalization") {
            if (value != "self" && value != "student" && value != "bn") {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": normalization must be self|student|bn");
            }
            cfg.normalization = value;
        } else if (key == "tau") {
            if (value == "one_over_n" || value == "1/n") {
                cfg.tau_rule = experiments::TauRule::OneOverN;
            } else if (value == "one_over_log_n" || value == "1/log(n)") {
                cfg.tau_rule = experiments::TauRule::OneOverLogN;
            } else if (value.rfind("fixed:", 0) == 0) {
                cfg.tau_rule = experiments::TauRule::Fixed;
                cfg.tau_fixed = parse_real(value.substr(6), lineno);
            } else {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": tau must be one_over_n|one_over_log_n|fixed:<t>");
            }
        } else if (key == "ns") {
            std::stringstream ss(value);
            std::string tok;
            cfg.ns.clear();
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) cfg.ns.push_back(parse_u64(tok, lineno));
            }
        } else if (key == "replicates") {
            cfg.replicates = parse_u64(value, lineno);
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, lineno);
            seen_seed = true;
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_u64(value, lineno));
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }

    std::vector<std::string> violations;
    if (cfg.model.empty()) violations.push_back("model is required");
    if (cfg.weight.empty()) violations.push_back("weight is required");
    if (!seen_seed) violations.push_back("seed is required (no wall-clock default)");
    if (cfg.ns.empty()) violations.push_back("ns must be a nonempty list");
    for (std::size_t i = 1; i < cfg.ns.size(); ++i) {
        if (cfg.ns[i] <= cfg.ns[i - 1]) {
            violations.push_back("ns must be strictly increasing");
            break;
        }
    }
    if (cfg.replicates < 1) violations.push_back("replicates must be >= 1");
    if (cfg.kind == processes::FunctionalKind::WeightedLp && !(cfg.p > 0.0)) {
        violations.push_back("p must be positive for lp functionals");
    }
    if (cfg.threads < 1) violations.push_back("threads must be >= 1");
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw ValidationError(msg);
    }
    return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "model = " << cfg.model << "\n";
    os << "weight = " << cfg.weight << "\n";
    os << "functional = "
       << (cfg.kind == processes::FunctionalKind::WeightedSup ? "sup" : "lp") << "\n";
    if (cfg.kind == processes::FunctionalKind::WeightedLp) os << "p = " << cfg.p << "\n";
    os << "normalization = " << cfg.normalization << "\n";
    switch (cfg.tau_rule) {
        case experiments::TauRule::OneOverN:
            os << "tau = one_over_n\n";
            break;
        case experiments::TauRule::OneOverLogN:
            os << "tau = one_over_log_n\n";
            break;
        case experiments::TauRule::Fixed:
            os << "tau = fixed:" << cfg.tau_fixed << "\n";
            break;
    }
    os << "ns = ";
    for (std::size_t i = 0; i < cfg.ns.size(); ++i) os << (i ? "," : "") << cfg.ns[i];
    os << "\n";
    os << "replicates = " << cfg.replicates << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "threads = " << cfg.threads << "\n";
    return os.str();
}

}  // namespace snlab::config
