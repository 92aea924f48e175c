#pragma once

#include <set>

#include "ips/registry.hpp"

namespace ips {

/// A fully parsed and validated experiment configuration.
struct RunConfig {
    std::string model_name;
    ParamMap model_params;

    std::string window_shape = "box";
    std::vector<int> radii;
    int dim = 1;

    double tau = 1.0;
    std::vector<double> times;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    std::string init = "empty";

    std::string functional;
    ParamMap functional_params;
    std::string experiment;

    // experiment-specific knobs
    std::vector<int> distances;   // decay
    std::vector<int> n_values;    // cluster
    std::int64_t cap = 6;         // oracle truncation
    int truncation_radius = 6;    // sigma lattice sum
    std::vector<Site> probes;     // couple (default: origin)

    std::string out_dir = "out";
    std::set<std::string> formats = {"csv", "json"};
};

struct ConfigIssue {
    int line = 0;  // 0 when not tied to a line
    std::string message;
};

struct ParseResult {
    RunConfig config;
    std::vector<ConfigIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Parses the sectioned key=value format and runs full validation,
/// collecting every error rather than stopping at the first.
ParseResult parse_config(const std::string &text);

}  // namespace ips
