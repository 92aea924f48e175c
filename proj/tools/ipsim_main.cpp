// Configuration-driven experiment runner: parses a sectioned key=value plan,
// dispatches to the harness, and writes deterministic CSV/JSON outputs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ips/config.hpp"
#include "ips/harness.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRateBound = 2;
constexpr int kExitAssertion = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string site_str(const ips::Site &v, int dim) {
    std::string out;
    for (int i = 0; i < dim; ++i) {
        if (i) out += "|";
        out += std::to_string(v[std::size_t(i)]);
    }
    return out;
}

/// Tracks written files so a failed run leaves no partial outputs behind.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string &name, const std::string &content) {
        fs::create_directories(dir_);
        const fs::path path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        os << content;
        os.close();
        written_.push_back(path);
    }

    void discard_all() {
        for (const fs::path &p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto &p : written_) out.push_back(p.filename().string());
        return out;
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

ordered_json config_json(const ips::RunConfig &cfg) {
    ordered_json j;
    j["model"]["name"] = cfg.model_name;
    for (const auto &[k, v] : cfg.model_params) j["model"][k] = v;
    j["window"]["shape"] = cfg.window_shape;
    j["window"]["radii"] = cfg.radii;
    j["window"]["dim"] = cfg.dim;
    j["run"]["tau"] = cfg.tau;
    j["run"]["times"] = cfg.times;
    j["run"]["replicates"] = cfg.replicates;
    j["run"]["seed"] = cfg.seed;
    j["run"]["init"] = cfg.init;
    j["statistic"]["functional"] = cfg.functional;
    for (const auto &[k, v] : cfg.functional_params) j["statistic"][k] = v;
    j["statistic"]["experiment"] = cfg.experiment;
    j["output"]["directory"] = cfg.out_dir;
    j["output"]["formats"] = std::vector<std::string>(cfg.formats.begin(), cfg.formats.end());
    return j;
}

struct RunOutcome {
    int exit_code = kExitOk;
    std::string csv_name;
    std::string csv;
    ordered_json summary;
};

RunOutcome run_experiment(const ips::RunConfig &cfg, int workers, bool inject_coupling_fault,
                          bool inject_rate_fault) {
    using namespace ips;
    RunOutcome out;

    JumpModel model = build_model(cfg.model_name, cfg.model_params);
    if (inject_rate_fault) {
        // test hook: report rates above the declared bound
        const double bad = model.c_max * 1.5;
        model.rate = [bad](const Patch &) { return bad; };
    }
    LocalFunctional H = build_functional(cfg.functional, cfg.functional_params, model);
    InitialDistribution init = build_init(cfg.init, model);
    std::vector<double> times = cfg.times.empty() ? std::vector<double>{cfg.tau} : cfg.times;
    ExperimentPlan plan = ExperimentPlan::make(model, H, cfg.radii, cfg.tau, times,
                                               cfg.replicates, cfg.seed, init, workers);

    std::ostringstream csv;
    ordered_json &summary = out.summary;
    summary["experiment"] = cfg.experiment;

    if (cfg.experiment == "lln") {
        const LlnReport report = run_lln(plan);
        csv << "model,functional,window_radius,window_size,tau,replicates,mean,std_err\n";
        for (const auto &row : report.rows)
            csv << cfg.model_name << "," << cfg.functional << "," << row.radius << ","
                << row.window_size << "," << fmt(cfg.tau) << "," << cfg.replicates << ","
                << fmt(row.mean) << "," << fmt(row.se) << "\n";
        summary["stabilized"] = report.stabilized;
        ordered_json wc = ordered_json::array();
        for (const auto &e : report.window_check.entries)
            wc.push_back({{"window_size", e.window_size},
                          {"boundary_ratio", e.boundary_ratio},
                          {"interior_consistent", e.interior_consistent}});
        summary["window_check"] = wc;
        out.csv_name = "lln.csv";
    } else if (cfg.experiment == "clt") {
        const CltReport report = run_clt(plan);
        csv << "window_size,s,t,cov_scaled,skew,ex_kurtosis,gof_stat,replicates\n";
        for (const auto &row : report.rows)
            csv << row.window_size << "," << fmt(row.s) << "," << fmt(row.t) << ","
                << fmt(row.cov_scaled) << "," << fmt(row.skew) << "," << fmt(row.ex_kurtosis)
                << "," << fmt(row.gof_stat) << "," << row.replicates << "\n";
        summary["degenerate_variance"] = report.degenerate_variance;
        out.csv_name = "clt.csv";
    } else if (cfg.experiment == "sigma") {
        const double s = times.front();
        const double t = times.back();
        const SigmaReport report = estimate_sigma(plan, s, t, cfg.truncation_radius);
        csv << "s,t,sigma_scaling,sigma_sum,se_a,se_b,agree\n";
        csv << fmt(report.s) << "," << fmt(report.t) << "," << fmt(report.sigma_scaling) << ","
            << fmt(report.sigma_sum) << "," << fmt(report.se_a) << "," << fmt(report.se_b) << ","
            << (report.agree ? 1 : 0) << "\n";
        summary["agree"] = report.agree;
        summary["truncation_warning"] = report.truncation_warning;
        summary["truncation_radius"] = report.truncation_radius;
        out.csv_name = "sigma.csv";
    } else if (cfg.experiment == "decay") {
        const double s = times.front();
        const double t = times.back();
        const DecayReport report = covariance_decay(plan, s, t, cfg.distances);
        csv << "distance,abs_cov,std_err,envelope\n";
        for (const auto &row : report.rows)
            csv << row.distance << "," << fmt(row.abs_cov) << "," << fmt(row.se) << ","
                << fmt(row.envelope) << "\n";
        summary["envelope_k"] = report.envelope_k;
        summary["fit_ok"] = report.fit_ok;
        summary["decreasing"] = report.decreasing;
        summary["below_envelope"] = report.below_envelope;
        out.csv_name = "decay.csv";
    } else if (cfg.experiment == "cluster") {
        const double delta = cluster_delta(model);
        const ClusterReport report =
            cluster_tail_probe(model, delta, cfg.n_values, cfg.replicates, cfg.seed, workers);
        csv << "n,time,empirical_p,bound,replicates\n";
        for (const auto &row : report.rows)
            csv << row.n << "," << fmt(row.time) << "," << fmt(row.empirical_p) << ","
                << fmt(row.bound) << "," << row.replicates << "\n";
        summary["delta"] = report.delta;
        summary["theta"] = report.theta;
        summary["all_within_bound"] = report.all_within_bound;
        if (!report.all_within_bound) out.exit_code = kExitAssertion;
        out.csv_name = "cluster.csv";
    } else if (cfg.experiment == "couple") {
        const Window inner = Window::box(cfg.dim, cfg.radii.front());
        const Window outer = Window::box(cfg.dim, cfg.radii.back());
        SiteSet probes(cfg.probes.begin(), cfg.probes.end());
        sort_unique(probes);
        CoupleReport report = coupling_check(model, inner, outer, init, cfg.tau, probes,
                                             cfg.replicates, cfg.seed, workers);
        if (inject_coupling_fault && !report.rows.empty()) {
            // test hook: force one recorded agreement into a violation
            for (auto &row : report.rows) {
                if (row.hypothesis_met && row.agreement) {
                    row.agreement = false;
                    ++report.violations;
                    break;
                }
            }
        }
        csv << "probe_site,hypothesis_met,agreement\n";
        for (const auto &row : report.rows)
            csv << site_str(row.probe, cfg.dim) << "," << (row.hypothesis_met ? 1 : 0) << ","
                << (row.agreement ? 1 : 0) << "\n";
        summary["hypothesis_met"] = report.hypothesis_met;
        summary["violations"] = report.violations;
        if (report.violations > 0) out.exit_code = kExitAssertion;
        out.csv_name = "couple.csv";
    } else if (cfg.experiment == "oracle") {
        const OracleReport report = oracle_compare(plan, cfg.cap);
        csv << "functional,tau,simulated,exact,z\n";
        csv << cfg.functional << "," << fmt(cfg.tau) << "," << fmt(report.simulated) << ","
            << fmt(report.exact) << "," << fmt(report.z) << "\n";
        summary["sink_mass"] = report.sink_mass;
        summary["pass"] = report.pass;
        if (!report.pass) out.exit_code = kExitAssertion;
        out.csv_name = "oracle.csv";
    } else if (cfg.experiment == "increments") {
        const IncrementReport report = increment_moment_probe(plan);
        csv << "gap,fourth_moment,std_err\n";
        for (const auto &row : report.rows)
            csv << fmt(row.gap) << "," << fmt(row.fourth_moment) << "," << fmt(row.se) << "\n";
        summary["fitted_exponent"] = report.fitted_exponent;
        summary["fit_ok"] = report.fit_ok;
        out.csv_name = "increments.csv";
    } else {
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }

    out.csv = csv.str();
    return out;
}

int command_run(const std::string &config_path, std::optional<std::uint64_t> seed_override,
                std::optional<std::size_t> replicates_override,
                std::optional<std::string> out_override, int workers,
                bool inject_coupling_fault, bool inject_rate_fault) {
    std::ifstream is(config_path);
    if (!is) {
        std::cerr << "error: cannot open config file '" << config_path << "'\n";
        return kExitConfig;
    }
    std::stringstream buffer;
    buffer << is.rdbuf();

    ips::ParseResult parsed = ips::parse_config(buffer.str());
    if (!parsed.ok()) {
        for (const auto &issue : parsed.issues) {
            if (issue.line > 0)
                std::cerr << config_path << ":" << issue.line << ": " << issue.message << "\n";
            else
                std::cerr << config_path << ": " << issue.message << "\n";
        }
        return kExitConfig;
    }
    ips::RunConfig cfg = parsed.config;
    if (seed_override) cfg.seed = *seed_override;
    if (replicates_override) cfg.replicates = *replicates_override;
    if (out_override) cfg.out_dir = *out_override;

    OutputSet outputs((fs::path(cfg.out_dir)));
    const auto start = std::chrono::steady_clock::now();
    try {
        RunOutcome outcome =
            run_experiment(cfg, workers, inject_coupling_fault, inject_rate_fault);
        if (cfg.formats.count("csv")) outputs.write(outcome.csv_name, outcome.csv);
        if (cfg.formats.count("json")) {
            ordered_json summary;
            summary["config"] = config_json(cfg);
            summary["seed"] = cfg.seed;
            summary["report"] = outcome.summary;
            summary["outputs"] = outputs.names();
            outputs.write("summary.json", summary.dump(2) + "\n");
        }
        const auto elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
        std::cerr << "completed " << cfg.experiment << " in " << elapsed.count() << " s\n";
        return outcome.exit_code;
    } catch (const ips::RateBoundError &e) {
        outputs.discard_all();
        std::cerr << "rate-bound violation: " << e.what() << "\n";
        return kExitRateBound;
    } catch (const ips::TruncationError &e) {
        outputs.discard_all();
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kExitAssertion;
    } catch (const ips::Error &e) {
        outputs.discard_all();
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int command_trace(const std::string &config_path, const std::string &out_path,
                  std::optional<std::uint64_t> seed_override) {
    std::ifstream is(config_path);
    if (!is) {
        std::cerr << "error: cannot open config file '" << config_path << "'\n";
        return kExitConfig;
    }
    std::stringstream buffer;
    buffer << is.rdbuf();
    ips::ParseResult parsed = ips::parse_config(buffer.str());
    if (!parsed.ok()) {
        for (const auto &issue : parsed.issues)
            std::cerr << config_path << ":" << issue.line << ": " << issue.message << "\n";
        return kExitConfig;
    }
    const ips::RunConfig &cfg = parsed.config;
    try {
        const ips::JumpModel model = ips::build_model(cfg.model_name, cfg.model_params);
        const ips::InitialDistribution init = ips::build_init(cfg.init, model);
        const ips::Window A = ips::Window::box(cfg.dim, cfg.radii.back());
        const std::uint64_t seed = seed_override.value_or(cfg.seed);
        if (out_path.empty() || out_path == "-") {
            ips::export_trajectory(model, A, init, cfg.tau, seed, std::cout);
        } else {
            std::ofstream os(out_path, std::ios::binary);
            ips::export_trajectory(model, A, init, cfg.tau, seed, os);
        }
        return kExitOk;
    } catch (const ips::RateBoundError &e) {
        std::cerr << "rate-bound violation: " << e.what() << "\n";
        return kExitRateBound;
    } catch (const ips::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"interacting particle system simulator and statistics harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::string out_dir;
    std::string trace_out;
    int workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    bool inject_coupling_fault = false;
    bool inject_rate_fault = false;

    auto *run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "config file path")->required();
    auto *seed_opt = run->add_option("--seed", seed, "override [run] seed");
    auto *rep_opt = run->add_option("--replicates", replicates, "override [run] replicates");
    auto *out_opt = run->add_option("--out", out_dir, "override [output] directory");
    run->add_option("--workers", workers, "worker pool size (results are independent of it)");
    run->add_flag("--inject-coupling-fault", inject_coupling_fault,
                  "test hook: force a coupling violation into the report")
        ->group("");  // hidden
    run->add_flag("--inject-rate-fault", inject_rate_fault,
                  "test hook: report local rates above the declared c_max")
        ->group("");  // hidden

    auto *list = app.add_subcommand("list", "list registered models and functionals");

    auto *trace = app.add_subcommand("trace", "write one replicate's event records as NDJSON");
    trace->add_option("config", config_path, "config file path")->required();
    trace->add_option("--out", trace_out, "output path (default: stdout)");
    auto *trace_seed_opt = trace->add_option("--seed", seed, "override [run] seed");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << ips::registry_listing();
        return kExitOk;
    }
    if (trace->parsed())
        return command_trace(config_path, trace_out,
                             trace_seed_opt->count() ? std::optional<std::uint64_t>(seed)
                                                     : std::nullopt);

    return command_run(config_path,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                       rep_opt->count() ? std::optional<std::size_t>(replicates) : std::nullopt,
                       out_opt->count() ? std::optional<std::string>(out_dir) : std::nullopt,
                       workers, inject_coupling_fault, inject_rate_fault);
}
