#pragma once

#include "ips/engine.hpp"
#include "ips/functionals.hpp"
#include "ips/generator.hpp"
#include "ips/stats.hpp"

namespace ips {

/// A fully resolved Monte Carlo experiment. Reports are deterministic given
/// the plan: replicate seeds are indexed and aggregation is order-fixed, so
/// the worker count never changes a result.
struct ExperimentPlan {
    JumpModel model;
    LocalFunctional H;
    std::vector<int> radii;        // box windows, increasing
    std::vector<Window> windows;   // aligned with radii
    double tau = 1.0;
    std::vector<double> times;     // observation times within [0, tau]
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    InitialDistribution init;
    int workers = 1;

    static ExperimentPlan make(JumpModel model, LocalFunctional H, std::vector<int> radii,
                               double tau, std::vector<double> times, std::size_t replicates,
                               std::uint64_t seed, InitialDistribution init, int workers = 1);
};

/// Runs fn(k) for k in [0, n) on the plan's worker pool.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &fn);

// ---- LLN ----

struct LlnRow {
    int radius = 0;
    std::size_t window_size = 0;
    double mean = 0.0;
    double se = 0.0;
};

struct LlnReport {
    std::vector<LlnRow> rows;
    bool stabilized = false;  // largest pair within 3 combined SE
    WindowSequenceReport window_check;
};

LlnReport run_lln(const ExperimentPlan &plan);

// ---- CLT ----

struct CltRow {
    std::size_t window_size = 0;
    double s = 0.0, t = 0.0;
    double cov_scaled = 0.0;
    double cov_se = 0.0;
    // marginal shape of the time-t fluctuation; nan except on the largest window
    double skew = 0.0;
    double ex_kurtosis = 0.0;
    double gof_stat = 0.0;
    std::size_t replicates = 0;
};

struct CltReport {
    std::vector<CltRow> rows;
    bool degenerate_variance = false;
};

CltReport run_clt(const ExperimentPlan &plan);

// ---- sigma(s,t) two-route estimate ----

struct SigmaReport {
    double s = 0.0, t = 0.0;
    double sigma_scaling = 0.0;  // method A: scaled window covariance
    double se_a = 0.0;
    double sigma_sum = 0.0;  // method B: truncated stationary lattice sum
    double se_b = 0.0;
    bool agree = false;              // within 3 combined SE
    bool truncation_warning = false; // last shell contributes > 1% of the sum
    int truncation_radius = 0;
};

SigmaReport estimate_sigma(const ExperimentPlan &plan, double s, double t,
                           int truncation_radius);

// ---- covariance decay ----

struct DecayRow {
    int distance = 0;
    double cov = 0.0;
    double abs_cov = 0.0;
    double se = 0.0;
    double envelope = 0.0;
    bool significant = false;  // |cov| > 3 SE
};

struct DecayReport {
    double s = 0.0, t = 0.0;
    std::vector<DecayRow> rows;
    double envelope_k = 0.0;  // K of the fitted K exp(-r/K)
    bool fit_ok = false;
    bool decreasing = false;      // on the significant range, with 3 SE slack
    bool below_envelope = false;  // at every significant distance
};

DecayReport covariance_decay(const ExperimentPlan &plan, double s, double t,
                             const std::vector<int> &distances);

// ---- Poisson-clock cluster tail ----

struct ClusterRow {
    int n = 0;
    double time = 0.0;  // delta * n
    double empirical_p = 0.0;
    double bound = 0.0;  // 2^-n
    double se = 0.0;
    std::size_t replicates = 0;
    bool within_bound = false;  // p <= bound + 3 SE
};

struct ClusterReport {
    double delta = 0.0;
    double theta = 0.0;
    std::vector<ClusterRow> rows;
    bool all_within_bound = false;
};

/// delta from the tail-bound recipe: theta > c_max (4 D^2 - 1), delta < ln2/theta.
double cluster_delta(const JumpModel &model);

ClusterReport cluster_tail_probe(const JumpModel &model, double delta,
                                 const std::vector<int> &n_values, std::size_t replicates,
                                 std::uint64_t seed, int workers = 1);

// ---- coupling audit ----

struct CoupleRow {
    Site probe{0, 0, 0};
    std::size_t replicate = 0;
    bool hypothesis_met = false;  // cluster contained in A
    bool agreement = false;
};

struct CoupleReport {
    std::vector<CoupleRow> rows;
    std::size_t hypothesis_met = 0;
    std::size_t violations = 0;  // hypothesis met but states differ; must be 0
};

CoupleReport coupling_check(const JumpModel &model, const Window &A, const Window &B,
                            const InitialDistribution &init, double tau,
                            const SiteSet &probes, std::size_t replicates, std::uint64_t seed,
                            int workers = 1);

// ---- exact generator oracle ----

struct OracleReport {
    double simulated = 0.0;
    double se = 0.0;
    double exact = 0.0;
    double z = 0.0;
    double sink_mass = 0.0;  // probability mass lost to truncation in the oracle
    std::size_t replicates = 0;
    bool pass = false;  // |z| <= 3
};

OracleReport oracle_compare(const ExperimentPlan &plan, std::int64_t cap);

// ---- increment fourth-moment scaling ----

struct IncrementRow {
    double gap = 0.0;
    double fourth_moment = 0.0;
    double se = 0.0;
};

struct IncrementReport {
    std::vector<IncrementRow> rows;
    double fitted_exponent = 0.0;
    bool fit_ok = false;
};

IncrementReport increment_moment_probe(const ExperimentPlan &plan);

}  // namespace ips
