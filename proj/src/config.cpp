#include "ips/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ips {

namespace {

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool parse_double(const std::string &s, double &out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string &s, std::uint64_t &out) {
    try {
        std::size_t pos = 0;
        out = std::stoull(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

struct Line {
    int number;
    std::string section;
    std::string key;
    std::string value;
};

}  // namespace

ParseResult parse_config(const std::string &text) {
    ParseResult result;
    RunConfig &cfg = result.config;
    auto issue = [&](int line, const std::string &msg) {
        result.issues.push_back({line, msg});
    };

    // ---- tokenize ----
    std::vector<Line> lines;
    {
        std::istringstream is(text);
        std::string raw;
        int number = 0;
        std::string section;
        while (std::getline(is, raw)) {
            ++number;
            const auto hash = raw.find('#');
            std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') {
                    issue(number, "malformed section header: " + s);
                    continue;
                }
                section = trim(s.substr(1, s.size() - 2));
                static const std::set<std::string> known{"model", "window", "run", "statistic",
                                                         "output"};
                if (!known.count(section))
                    issue(number, "unknown section [" + section + "]");
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                issue(number, "expected key = value, got: " + s);
                continue;
            }
            if (section.empty()) {
                issue(number, "key outside any [section]: " + s);
                continue;
            }
            lines.push_back({number, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1))});
        }
    }

    // ---- assign ----
    bool have_model = false, have_experiment = false, have_functional = false;
    for (const Line &ln : lines) {
        auto numeric = [&](double &slot) {
            double v;
            if (parse_double(ln.value, v))
                slot = v;
            else
                issue(ln.number, "key '" + ln.key + "' expects a number, got '" + ln.value + "'");
        };
        auto numeric_list = [&](std::vector<double> &slot) {
            slot.clear();
            for (const std::string &tok : split_ws(ln.value)) {
                double v;
                if (!parse_double(tok, v)) {
                    issue(ln.number, "key '" + ln.key + "' expects numbers, got '" + tok + "'");
                    return;
                }
                slot.push_back(v);
            }
        };
        auto int_list = [&](std::vector<int> &slot) {
            std::vector<double> vals;
            numeric_list(vals);
            slot.clear();
            for (double v : vals) {
                if (v != std::floor(v)) {
                    issue(ln.number, "key '" + ln.key + "' expects integers");
                    return;
                }
                slot.push_back(int(v));
            }
        };

        if (ln.section == "model") {
            if (ln.key == "name") {
                cfg.model_name = ln.value;
                have_model = true;
            } else {
                double v;
                if (parse_double(ln.value, v))
                    cfg.model_params[ln.key] = v;
                else
                    issue(ln.number, "model parameter '" + ln.key + "' expects a number");
            }
        } else if (ln.section == "window") {
            if (ln.key == "shape") {
                cfg.window_shape = ln.value;
                if (ln.value != "box") issue(ln.number, "only 'box' windows are supported");
            } else if (ln.key == "radii") {
                int_list(cfg.radii);
            } else if (ln.key == "dim") {
                double v = 1;
                numeric(v);
                cfg.dim = int(v);
            } else {
                issue(ln.number, "unknown [window] key '" + ln.key + "'");
            }
        } else if (ln.section == "run") {
            if (ln.key == "tau") {
                numeric(cfg.tau);
            } else if (ln.key == "times") {
                numeric_list(cfg.times);
            } else if (ln.key == "replicates") {
                double v = 0;
                numeric(v);
                if (v < 1 || v != std::floor(v))
                    issue(ln.number, "replicates must be a positive integer");
                else
                    cfg.replicates = std::size_t(v);
            } else if (ln.key == "seed") {
                std::uint64_t v;
                if (parse_u64(ln.value, v))
                    cfg.seed = v;
                else
                    issue(ln.number, "seed expects a non-negative integer");
            } else if (ln.key == "init") {
                cfg.init = ln.value;
            } else {
                issue(ln.number, "unknown [run] key '" + ln.key + "'");
            }
        } else if (ln.section == "statistic") {
            if (ln.key == "functional") {
                cfg.functional = ln.value;
                have_functional = true;
            } else if (ln.key == "experiment") {
                cfg.experiment = ln.value;
                have_experiment = true;
            } else if (ln.key == "distances") {
                int_list(cfg.distances);
            } else if (ln.key == "n_values") {
                int_list(cfg.n_values);
            } else if (ln.key == "cap") {
                double v = 0;
                numeric(v);
                cfg.cap = std::int64_t(v);
            } else if (ln.key == "truncation_radius") {
                double v = 0;
                numeric(v);
                cfg.truncation_radius = int(v);
            } else if (ln.key == "probes") {
                cfg.probes.clear();
                std::istringstream groups(ln.value);
                std::string group;
                while (std::getline(groups, group, ';')) {
                    const auto toks = split_ws(group);
                    if (toks.empty()) continue;
                    Site site{0, 0, 0};
                    bool ok = toks.size() <= kMaxDim;
                    for (std::size_t i = 0; ok && i < toks.size(); ++i) {
                        double v;
                        ok = parse_double(toks[i], v) && v == std::floor(v);
                        if (ok) site[i] = std::int32_t(v);
                    }
                    if (!ok) {
                        issue(ln.number, "probes expects ';'-separated integer tuples");
                        break;
                    }
                    cfg.probes.push_back(site);
                }
            } else {
                double v;
                if (parse_double(ln.value, v))
                    cfg.functional_params[ln.key] = v;
                else
                    issue(ln.number, "functional parameter '" + ln.key + "' expects a number");
            }
        } else if (ln.section == "output") {
            if (ln.key == "directory") {
                cfg.out_dir = ln.value;
            } else if (ln.key == "formats") {
                cfg.formats.clear();
                for (const std::string &f : split_ws(ln.value)) {
                    if (f != "csv" && f != "json")
                        issue(ln.number, "unknown output format '" + f + "'");
                    else
                        cfg.formats.insert(f);
                }
            } else {
                issue(ln.number, "unknown [output] key '" + ln.key + "'");
            }
        }
    }

    // ---- semantic validation ----
    if (!have_model) issue(0, "[model] section must set 'name'");
    if (!have_functional) issue(0, "[statistic] section must set 'functional'");
    if (!have_experiment) issue(0, "[statistic] section must set 'experiment'");

    static const std::set<std::string> kinds{"lln",     "clt",    "sigma",  "decay",
                                             "cluster", "couple", "oracle", "increments"};
    if (have_experiment && !kinds.count(cfg.experiment)) {
        std::string all;
        for (const auto &k : kinds) all += (all.empty() ? "" : ", ") + k;
        issue(0, "unknown experiment '" + cfg.experiment + "' (available: " + all + ")");
    }

    if (cfg.radii.empty()) issue(0, "[window] radii must list at least one radius");
    if (!std::is_sorted(cfg.radii.begin(), cfg.radii.end()) ||
        std::adjacent_find(cfg.radii.begin(), cfg.radii.end()) != cfg.radii.end())
        issue(0, "[window] radii must be strictly increasing");
    for (int r : cfg.radii)
        if (r < 0) issue(0, "[window] radii must be >= 0");
    if (cfg.tau < 0.0) issue(0, "[run] tau must be >= 0");
    for (double t : cfg.times)
        if (t < 0.0 || t > cfg.tau) issue(0, "[run] times must lie within [0, tau]");
    if (!std::is_sorted(cfg.times.begin(), cfg.times.end()))
        issue(0, "[run] times must be increasing");

    if (cfg.experiment == "clt" && cfg.times.empty())
        issue(0, "clt experiment needs [run] times");
    if ((cfg.experiment == "sigma" || cfg.experiment == "decay") && cfg.times.size() < 1)
        issue(0, cfg.experiment + " experiment needs [run] times (s and t)");
    if (cfg.experiment == "increments" && cfg.times.size() < 2)
        issue(0, "increments experiment needs a [run] time grid");
    if (cfg.experiment == "couple" && cfg.radii.size() < 2)
        issue(0, "couple experiment needs two radii (inner and outer window)");
    if (cfg.experiment == "decay" && cfg.distances.empty())
        cfg.distances = {0, 1, 2, 3, 4};
    if (cfg.experiment == "cluster" && cfg.n_values.empty()) cfg.n_values = {1, 2, 3};
    if (cfg.probes.empty()) cfg.probes = {Site{0, 0, 0}};
    if (cfg.cap < 1) issue(0, "cap must be >= 1");
    if (cfg.truncation_radius < 1) issue(0, "truncation_radius must be >= 1");

    // model/functional existence and parameter validity
    if (have_model) {
        try {
            const JumpModel model = build_model(cfg.model_name, cfg.model_params);
            if (model.tmpl.dim() != cfg.dim)
                issue(0, "window dim " + std::to_string(cfg.dim) + " does not match model dim " +
                             std::to_string(model.tmpl.dim()));
            if (have_functional) {
                try {
                    build_functional(cfg.functional, cfg.functional_params, model);
                } catch (const Error &e) {
                    issue(0, e.what());
                }
            }
            try {
                build_init(cfg.init, model);
            } catch (const Error &e) {
                issue(0, e.what());
            }
        } catch (const Error &e) {
            issue(0, e.what());
        }
    }

    return result;
}

}  // namespace ips
