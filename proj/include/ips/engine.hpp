#pragma once

#include <functional>
#include <optional>
#include <ostream>

#include "ips/model.hpp"

namespace ips {

/// One processed stream event. `jumped` is false when the thinning kept the
/// patch unchanged. Patch diffs are captured only when requested.
struct Event {
    double time = 0.0;
    Site site{0, 0, 0};
    double label = 0.0;
    bool jumped = false;
    std::optional<Patch> before;
    std::optional<Patch> after;
};

struct Trajectory {
    Configuration initial;
    Configuration final_state;
    double horizon = 0.0;
    std::size_t processed_events = 0;
    std::size_t jump_events = 0;
    /// Present only when event recording was requested.
    std::vector<Event> events;
    /// Configurations at the requested snapshot times (right-continuous).
    std::vector<Configuration> snapshots;
};

/// Applies one stream event at site v with uniform label u: thin with
/// probability 1 - rate/c_max, otherwise rewrite the patch with a sample of
/// the jump law. Returns whether a jump happened.
bool apply_event(const JumpModel &model, Configuration &config, const Site &v, double u);

struct SimulateOptions {
    std::vector<double> snapshot_times;  // sorted times in [0, tau]
    bool record_events = false;
    bool record_patches = false;  // implies record_events
    /// Called after each processed event (post-state). Used by invariant
    /// tests; not part of the statistical pipeline.
    std::function<void(const Event &, const Configuration &)> on_event;
};

/// Runs the windowed dynamics: only sites of A carry active clocks; states
/// are materialized on the N-neighborhood of A and frozen initial values are
/// kept outside A's clocks' reach. Deterministic given (seed, model, A, tau,
/// init).
Trajectory simulate_window(const JumpModel &model, const Window &A,
                           const InitialDistribution &init, double tau, std::uint64_t seed,
                           const SimulateOptions &opts = {});

/// Sites whose ground vertex reaches an arrival at a target site by time
/// `horizon`, following the oriented influence graph over the realized
/// streams of `arrival_region`. Pure function of the supplied arrivals.
struct ArrivalRecord {
    Site site{0, 0, 0};
    double time = 0.0;
};

SiteSet affecting_sites_from_arrivals(const std::vector<ArrivalRecord> &arrivals,
                                      const SiteSet &targets, double horizon,
                                      const NeighborhoodTemplate &N);

/// Sites with a "reaching" arrival, i.e. an arrival lying on a directed path
/// into the target set. The affecting set is their 2-neighborhood dilation.
SiteSet reaching_arrival_sites(const std::vector<ArrivalRecord> &arrivals,
                               const SiteSet &targets, double horizon,
                               const NeighborhoodTemplate &N);

struct InfluenceCluster {
    Site center{0, 0, 0};
    double time = 0.0;
    SiteSet members;
};

/// The influence cluster C_{v,t}: sites whose initial data or events could
/// have affected the 2-neighborhood of v by time t, computed by reverse
/// reachability over the streams materialized on `region`. Throws
/// ClusterEscapeError if reachability touches the region boundary.
InfluenceCluster influence_cluster(std::uint64_t seed, double c_max, const Site &v, double tau,
                                   const SiteSet &region, const NeighborhoodTemplate &N);

/// Materializes all stream arrivals (times only) for `sites` up to horizon.
std::vector<ArrivalRecord> materialize_arrivals(std::uint64_t seed, double c_max,
                                                const SiteSet &sites, double horizon);

struct CoupledProbeResult {
    Site probe{0, 0, 0};
    bool cluster_contained = false;  // C_{v,tau} subset of A
    bool cluster_escaped = false;    // reachability left the B-region halo
    bool agree = false;              // states equal on N_v
};

struct CoupledResult {
    Trajectory inner;  // window A
    Trajectory outer;  // window B
    std::vector<CoupledProbeResult> probes;
};

/// Runs A- and B-window dynamics on the same streams and initial draw and
/// reports, per probe site, cluster containment and neighborhood agreement.
/// Whenever the cluster fits in A agreement is exact.
CoupledResult coupled_windows(const JumpModel &model, const Window &A, const Window &B,
                              const InitialDistribution &init, double tau, std::uint64_t seed,
                              const SiteSet &probes);

/// Newline-delimited trajectory export for debugging. One JSON record per
/// processed event.
void export_trajectory(const JumpModel &model, const Window &A, const InitialDistribution &init,
                       double tau, std::uint64_t seed, std::ostream &out);

}  // namespace ips
