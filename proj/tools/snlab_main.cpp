// Command-line front end: weight classification, norming tables, limit and
// process simulations, the counterexample experiment, and artifact tooling.
//
// Exit codes: 0 success, 2 validation/usage, 3 numeric refusal, 4 I/O.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snlab/artifact_io.hpp"
#include "snlab/config.hpp"
#include "snlab/criterion.hpp"
#include "snlab/dan_models.hpp"
#include "snlab/experiments.hpp"
#include "snlab/processes.hpp"
#include "snlab/version.hpp"
#include "snlab/wiener.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace snlab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRefusal = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io::IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out.flush()) throw io::IoError("write failed for '" + path.string() + "'");
}

std::string verdict_name(criterion::VerdictKind k) {
    switch (k) {
        case criterion::VerdictKind::AllC:
            return "AllC";
        case criterion::VerdictKind::SomeC:
            return "SomeC";
        case criterion::VerdictKind::Divergent:
            return "Divergent";
    }
    return "?";
}

std::string tail_name(criterion::TailDecision d) {
    switch (d) {
        case criterion::TailDecision::Summable:
            return "summable";
        case criterion::TailDecision::Divergent:
            return "divergent";
        case criterion::TailDecision::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

int cmd_classify_weight(const std::string& weight_spec, const std::string& c_grid_text,
                        int depth, double tail_tol, const std::string& out_path) {
    const auto w = weights::WeightFunction::parse(weight_spec);
    const std::vector<double> c_grid = parse_real_list(c_grid_text);
    const auto verdict = criterion::classify_criterion(w, c_grid, depth, tail_tol);

    json rep;
    rep["weight"] = w.id();
    rep["verdict"] = verdict_name(verdict.kind);
    if (verdict.c_threshold_estimate) rep["c_threshold_estimate"] = *verdict.c_threshold_estimate;
    rep["max_depth"] = verdict.max_depth;
    rep["code_version"] = kCodeVersion;
    json per_c = json::array();
    for (const auto& pc : verdict.per_c) {
        json item;
        item["c"] = pc.c;
        item["tail"] = tail_name(pc.tail);
        item["blocks"] = pc.blocks;
        per_c.push_back(std::move(item));
    }
    rep["per_c"] = std::move(per_c);
    if (verdict.inconclusive_present()) rep["inconclusive_c"] = verdict.inconclusive_c;

    std::cout << "weight " << w.id() << ": " << verdict_name(verdict.kind);
    if (verdict.c_threshold_estimate) {
        std::cout << " (c threshold ~ " << *verdict.c_threshold_estimate << ")";
    }
    std::cout << "\n";
    if (!out_path.empty()) {
        write_text(out_path, rep.dump(2) + "\n");
    } else {
        std::cout << rep.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_tabulate_norming(const std::string& model_spec, const std::string& js_text,
                         const std::string& out_path) {
    const auto model = models::DistributionModel::parse(model_spec);
    const auto js = config::parse_n_list(js_text);
    const auto table = model.norming_table(js);
    std::ostringstream os;
    os << "j,eta,l_eta,b2,sigma_star\n";
    os.precision(17);
    for (const auto& row : table.rows) {
        os << row.j << "," << row.eta << "," << row.l_eta << "," << row.b_squared << ","
           << row.sigma_star << "\n";
    }
    if (!out_path.empty()) {
        write_text(out_path, os.str());
    } else {
        std::cout << os.str();
    }
    return kExitOk;
}

int cmd_simulate_limit(const std::string& weight_spec, const std::string& kind, double p,
                       std::uint64_t replicates, std::uint64_t seed, int threads, int grid_m,
                       double grid_r, double grid_eps, bool refinement_check,
                       const std::string& out_path) {
    const auto w = weights::WeightFunction::parse(weight_spec);
    const auto grid = wiener::WienerGrid::make(grid_m, grid_r, grid_eps);
    wiener::LimitOptions opts;
    opts.seed = seed;
    opts.replicates = replicates;
    opts.threads = threads;
    opts.refinement_check = refinement_check;

    const auto dist = kind == "sup" ? wiener::limit_sup_functional(w, grid, opts)
                                    : wiener::limit_lp_functional(w, p, grid, opts);
    io::write_distribution(dist, out_path);
    std::cout << "wrote " << dist.count() << " replicates to " << out_path << " (median "
              << dist.median() << ")\n";
    return kExitOk;
}

std::string summary_csv(const experiments::ConvergenceReport& rep) {
    std::ostringstream os;
    os << "n,replicates,ks_to_limit,median,iqr\n";
    os.precision(17);
    for (const auto& row : rep.rows) {
        os << row.n << "," << row.replicates << "," << row.ks_to_limit << "," << row.median
           << "," << row.iqr << "\n";
    }
    return os.str();
}

int cmd_simulate_process(const std::string& config_path, const std::string& limit_path,
                         bool log_replicates) {
    config::ExperimentConfig cfg;
    {
        std::ifstream in(config_path);
        if (!in) throw io::IoError("cannot open config '" + config_path + "'");
        cfg = config::parse_config(in);
    }
    const auto model = models::DistributionModel::parse(cfg.model);
    const auto weight = weights::WeightFunction::parse(cfg.weight);

    experiments::RunOptions opts;
    opts.seed = cfg.seed;
    opts.replicates = cfg.replicates;
    opts.threads = cfg.threads;

    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);

    // the limit sample: load if given, else simulate with the same budget
    std::optional<stats::EmpiricalDistribution> limit;
    if (!limit_path.empty()) {
        limit = io::read_distribution(limit_path);
        if (limit->meta().weight != weight.id()) {
            std::cerr << "error: limit artifact weight '" << limit->meta().weight
                      << "' does not match '" << weight.id() << "'\n";
            return kExitValidation;
        }
    } else {
        wiener::LimitOptions wopts;
        wopts.seed = cfg.seed;
        wopts.replicates = cfg.replicates;
        wopts.threads = cfg.threads;
        const auto grid = wiener::WienerGrid::make();
        limit = cfg.kind == processes::FunctionalKind::WeightedSup
                    ? wiener::limit_sup_functional(weight, grid, wopts)
                    : wiener::limit_lp_functional(weight, cfg.p, grid, wopts);
        io::write_distribution(*limit, dir / "limit.dist");
    }

    processes::Normalization::Mode mode = processes::Normalization::Mode::BySelf;
    if (cfg.normalization == "student") mode = processes::Normalization::Mode::ByStudent;
    if (cfg.normalization == "bn") mode = processes::Normalization::Mode::ByBn;

    const auto report =
        cfg.kind == processes::FunctionalKind::WeightedSup
            ? experiments::run_functional_convergence(model, weight,
                                                      processes::FunctionalKind::WeightedSup,
                                                      mode, cfg.ns, opts, cfg.tau_rule,
                                                      cfg.tau_fixed, cfg.p, *limit)
            : experiments::run_lp_convergence(model, weight, cfg.p, cfg.ns, opts, *limit);

    write_text(dir / "summary.csv", summary_csv(report));
    write_text(dir / "config.echo", config::render_config(cfg));

    // per-n artifacts, reproducible bit-for-bit under the config seed
    for (std::uint64_t n : cfg.ns) {
        processes::FunctionalSpec spec;
        spec.kind = cfg.kind;
        spec.p = cfg.p;
        spec.norm.mode = mode;
        if (mode == processes::Normalization::Mode::ByBn) {
            spec.norm.b_n = experiments::norming_constant(model, n);
        }
        if (cfg.kind == processes::FunctionalKind::WeightedSup) {
            spec.tau = experiments::resolve_tau(cfg.tau_rule, cfg.tau_fixed, n);
        }
        const std::string tag = "conv:" + model.id() + ":" + weight.id() + ":" +
                                (cfg.kind == processes::FunctionalKind::WeightedSup ? "sup"
                                                                                    : "lp");
        const auto res = experiments::functional_samples(model, weight, spec, n, opts, tag);
        io::write_distribution(res.dist, dir / ("samples_n" + std::to_string(n) + ".dist"));
        if (log_replicates) {
            std::ostringstream os;
            os.precision(17);
            for (std::size_t i = 0; i < res.dist.count(); ++i) {
                os << R"({"replicate":)" << i << R"(,"value":)" << res.dist.values()[i] << "}\n";
            }
            write_text(dir / ("replicates_n" + std::to_string(n) + ".jsonl"), os.str());
        }
    }

    std::cout << summary_csv(report);
    std::cout << "# " << report.verdict_hint << "\n";
    if (report.degenerate_total > 0) {
        std::cout << "# degenerate paths dropped: " << report.degenerate_total << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    const auto a = io::read_distribution(a_path);
    const auto b = io::read_distribution(b_path);
    if (!a.meta().compatible_with(b.meta())) {
        std::cerr << "error: artifacts are not comparable (weight/functional mismatch): '"
                  << a.meta().weight << "/" << a.meta().functional << "' vs '" << b.meta().weight
                  << "/" << b.meta().functional << "'\n";
        return kExitValidation;
    }
    std::cout << "ks_distance = " << stats::ks_distance(a, b) << "\n";
    return kExitOk;
}

int cmd_counterexample(const std::string& ns_text, std::uint64_t replicates, std::uint64_t seed,
                       int threads, const std::string& out_dir) {
    experiments::RunOptions opts;
    opts.seed = seed;
    opts.replicates = replicates;
    opts.threads = threads;
    const auto ns = config::parse_n_list(ns_text);
    const auto rep = experiments::run_counterexample(ns, opts);

    std::ostringstream os;
    os.precision(10);
    os << "n,p_sup_gt_quarter_loglog,p_sup_gt_quarter_sqrtlog,lower_bound,l_ratio,l_ratio_bound\n";
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
        os << rep.ns[i] << "," << rep.p_loglog[i] << "," << rep.p_contrast[i] << ","
           << rep.lower_bound[i] << "," << rep.l_ratio[i] << "," << rep.l_ratio_bound[i] << "\n";
    }
    std::cout << os.str();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "counterexample.csv", os.str());
    }
    return kExitOk;
}

int cmd_lp_experiment(const std::string& model_spec, const std::string& weight_spec, double p,
                      const std::string& ns_text, std::uint64_t replicates, std::uint64_t seed,
                      int threads) {
    const auto model = models::DistributionModel::parse(model_spec);
    const auto weight = weights::WeightFunction::parse(weight_spec);
    const auto ns = config::parse_n_list(ns_text);

    experiments::RunOptions opts;
    opts.seed = seed;
    opts.replicates = replicates;
    opts.threads = threads;

    wiener::LimitOptions wopts;
    wopts.seed = seed;
    wopts.replicates = replicates;
    wopts.threads = threads;
    const auto limit = wiener::limit_lp_functional(weight, p, wiener::WienerGrid::make(), wopts);
    const auto rep = experiments::run_lp_convergence(model, weight, p, ns, opts, limit);
    std::cout << summary_csv(rep);
    std::cout << "# " << rep.verdict_hint << "\n";
    return kExitOk;
}

int cmd_ad188(const std::string& model_spec, const std::string& ns_text) {
    const auto model = models::DistributionModel::parse(model_spec);
    const auto ns = config::parse_n_list(ns_text);
    const auto rows = experiments::run_ad188_check(model, ns);
    std::cout << "n,value\n";
    std::cout.precision(12);
    for (const auto& [n, v] : rows) std::cout << n << "," << v << "\n";
    return kExitOk;
}

int cmd_vn_bn(const std::string& model_spec, const std::string& ns_text,
              std::uint64_t replicates, std::uint64_t seed, int threads, double eps) {
    const auto model = models::DistributionModel::parse(model_spec);
    const auto ns = config::parse_n_list(ns_text);
    experiments::RunOptions opts;
    opts.seed = seed;
    opts.replicates = replicates;
    opts.threads = threads;
    const auto rows = experiments::run_vn_bn_concentration(model, ns, opts, eps);
    std::cout << "n,fraction_within_eps\n";
    for (const auto& [n, f] : rows) std::cout << n << "," << f << "\n";
    return kExitOk;
}

int cmd_eval_path(const std::string& increments_text, const std::string& kind,
                  const std::string& weight_spec, double p, double tau,
                  const std::string& normalization, double b_n) {
    const auto inc = parse_real_list(increments_text);
    const auto w = weights::WeightFunction::parse(weight_spec);
    processes::FunctionalSpec spec;
    spec.kind = kind == "lp" ? processes::FunctionalKind::WeightedLp
                             : processes::FunctionalKind::WeightedSup;
    spec.p = p;
    spec.tau = tau;
    if (normalization == "self") {
        spec.norm = processes::Normalization::by_self();
    } else if (normalization == "student") {
        spec.norm = processes::Normalization::by_student();
    } else if (normalization == "bn") {
        spec.norm = processes::Normalization::by_bn(b_n);
    } else {
        std::cerr << "error: normalization must be self|student|bn\n";
        return kExitValidation;
    }
    const processes::PathSample path(inc);
    std::cout.precision(17);
    std::cout << processes::functional_value(path, w, spec) << "\n";
    return kExitOk;
}

int cmd_report(const std::string& dir_text) {
    const fs::path dir(dir_text);
    if (!fs::is_directory(dir)) throw io::IoError("not a directory: '" + dir_text + "'");
    std::ostringstream md;
    md << "# snlab experiment report\n\n";
    bool any = false;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        if (p.extension() == ".csv") {
            any = true;
            md << "## " << p.filename().string() << "\n\n";
            std::ifstream in(p);
            std::string line;
            bool header = true;
            while (std::getline(in, line)) {
                std::string row = "| ";
                for (char c : line) row += (c == ',') ? std::string(" | ") : std::string(1, c);
                row += " |";
                md << row << "\n";
                if (header) {
                    const auto cols =
                        static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
                    md << "|";
                    for (std::size_t i = 0; i < cols; ++i) md << " --- |";
                    md << "\n";
                    header = false;
                }
            }
            md << "\n";
        } else if (p.filename() == "config.echo") {
            md << "## resolved config\n\n```\n";
            std::ifstream in(p);
            md << in.rdbuf() << "```\n\n";
            any = true;
        }
    }
    if (!any) md << "(no CSV summaries found)\n";
    const fs::path out = dir / "report.md";
    write_text(out, md.str());
    std::cout << "wrote " << out.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation lab for weighted self-normalized partial-sum limits"};
    app.set_version_flag("--version", kCodeVersion);
    app.require_subcommand(1);

    std::string weight_spec, c_grid_text, out_path;
    int depth = 60;
    double tail_tol = 0.05;
    auto* classify = app.add_subcommand("classify-weight", "classify I(q,c) over a c grid");
    classify->add_option("--weight", weight_spec, "weight spec, e.g. sqrtloglog:1")->required();
    classify->add_option("--c-grid", c_grid_text, "comma-separated c values");
    classify->add_option("--depth", depth, "dyadic block depth");
    classify->add_option("--tail-tol", tail_tol, "geometric ratio tolerance");
    classify->add_option("--out", out_path, "write the JSON report here");

    std::string model_spec, js_text;
    auto* tab = app.add_subcommand("tabulate-norming", "emit j,eta,l_eta,b2,sigma_star rows");
    tab->add_option("--model", model_spec, "model spec, e.g. slowvary:0.5")->required();
    tab->add_option("--js", js_text, "comma-separated j values")->required();
    tab->add_option("--out", out_path, "write CSV here instead of stdout");

    std::string kind = "sup";
    double p = 1.0;
    std::uint64_t replicates = 2000, seed = 0;
    int threads = 1, grid_m = 4096;
    double grid_r = 0.94, grid_eps = 1e-10;
    bool refinement_check = false;
    auto* lim = app.add_subcommand("simulate-limit", "sample a Wiener limit functional");
    lim->add_option("--weight", weight_spec)->required();
    lim->add_option("--kind", kind, "sup | lp")->check(CLI::IsMember({"sup", "lp"}));
    lim->add_option("--p", p, "exponent for lp");
    lim->add_option("--replicates", replicates);
    lim->add_option("--seed", seed)->required();
    lim->add_option("--threads", threads);
    lim->add_option("--grid-m", grid_m);
    lim->add_option("--grid-r", grid_r);
    lim->add_option("--grid-eps", grid_eps);
    lim->add_flag("--refinement-check", refinement_check);
    lim->add_option("--out", out_path)->required();

    std::string config_path, limit_path;
    bool log_replicates = false;
    auto* proc = app.add_subcommand("simulate-process", "run a convergence experiment");
    proc->add_option("--config", config_path, "experiment config file")->required();
    proc->add_option("--limit", limit_path, "reuse a simulated limit artifact");
    proc->add_flag("--log-replicates", log_replicates, "write per-replicate JSONL");

    std::string a_path, b_path;
    auto* cmp = app.add_subcommand("compare", "KS distance between two artifacts");
    cmp->add_option("--a", a_path)->required();
    cmp->add_option("--b", b_path)->required();

    std::string ns_text = "1000,1000000";
    std::string out_dir;
    auto* ce = app.add_subcommand("counterexample", "the loglog-weight window experiment");
    ce->add_option("--ns", ns_text);
    ce->add_option("--replicates", replicates);
    ce->add_option("--seed", seed)->required();
    ce->add_option("--threads", threads);
    ce->add_option("--out-dir", out_dir);

    auto* lpx = app.add_subcommand("lp-experiment", "L_p convergence experiment");
    lpx->add_option("--model", model_spec)->required();
    lpx->add_option("--weight", weight_spec)->required();
    lpx->add_option("--p", p);
    lpx->add_option("--ns", ns_text)->required();
    lpx->add_option("--replicates", replicates);
    lpx->add_option("--seed", seed)->required();
    lpx->add_option("--threads", threads);

    auto* ad = app.add_subcommand("ad188", "deterministic renormalized-dispersion rows");
    ad->add_option("--model", model_spec)->required();
    ad->add_option("--ns", ns_text)->required();

    double eps = 0.1;
    auto* vb = app.add_subcommand("vn-bn", "V_n^2/b_n^2 concentration fractions");
    vb->add_option("--model", model_spec)->required();
    vb->add_option("--ns", ns_text)->required();
    vb->add_option("--replicates", replicates);
    vb->add_option("--seed", seed)->required();
    vb->add_option("--threads", threads);
    vb->add_option("--eps", eps);

    std::string increments_text, normalization = "self";
    double tau = 0.0, b_n = 1.0;
    auto* ev = app.add_subcommand("eval-path", "evaluate one functional on explicit increments");
    ev->add_option("--increments", increments_text, "comma-separated increments")->required();
    ev->add_option("--functional", kind, "sup | lp")->check(CLI::IsMember({"sup", "lp"}));
    ev->add_option("--weight", weight_spec)->default_val("const:1");
    ev->add_option("--p", p);
    ev->add_option("--tau", tau);
    ev->add_option("--normalization", normalization);
    ev->add_option("--bn", b_n, "norming constant for --normalization bn");

    std::string report_dir;
    auto* rp = app.add_subcommand("report", "render CSV summaries into markdown");
    rp->add_option("--dir", report_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (app.got_subcommand(classify)) {
            return cmd_classify_weight(weight_spec, c_grid_text, depth, tail_tol, out_path);
        }
        if (app.got_subcommand(tab)) return cmd_tabulate_norming(model_spec, js_text, out_path);
        if (app.got_subcommand(lim)) {
            return cmd_simulate_limit(weight_spec, kind, p, replicates, seed, threads, grid_m,
                                      grid_r, grid_eps, refinement_check, out_path);
        }
        if (app.got_subcommand(proc)) {
            return cmd_simulate_process(config_path, limit_path, log_replicates);
        }
        if (app.got_subcommand(cmp)) return cmd_compare(a_path, b_path);
        if (app.got_subcommand(ce)) {
            return cmd_counterexample(ns_text, replicates, seed, threads, out_dir);
        }
        if (app.got_subcommand(lpx)) {
            return cmd_lp_experiment(model_spec, weight_spec, p, ns_text, replicates, seed,
                                     threads);
        }
        if (app.got_subcommand(ad)) return cmd_ad188(model_spec, ns_text);
        if (app.got_subcommand(vb)) {
            return cmd_vn_bn(model_spec, ns_text, replicates, seed, threads, eps);
        }
        if (app.got_subcommand(ev)) {
            return cmd_eval_path(increments_text, kind, weight_spec, p, tau, normalization, b_n);
        }
        if (app.got_subcommand(rp)) return cmd_report(report_dir);
        std::cerr << "error: no subcommand\n";
        return kExitValidation;
    } catch (const wiener::LimitRefusal& e) {
        std::cerr << "refusal: " << e.what() << "\n";
        return kExitRefusal;
    } catch (const io::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const io::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitIo;
    } catch (const config::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const config::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
