#include "ips/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace ips {

bool apply_event(const JumpModel &model, Configuration &config, const Site &v, double u) {
    Patch patch = config.patch(v, model.tmpl);
    const double a = model.rate(patch);
    if (a < 0.0) throw RateBoundError(model.name + ": negative local rate");
    if (a > model.c_max * (1.0 + 1e-12))
        throw RateBoundError(model.name + ": local rate " + std::to_string(a) +
                             " exceeds declared c_max " + std::to_string(model.c_max));
    const double p = a / model.c_max;
    if (!(u < p)) return false;  // thinned: stay put
    LabelStream labels(u / p);
    model.outcome(patch, labels);
    config.apply_patch(v, model.tmpl, patch);
    return true;
}

namespace {

struct PendingEvent {
    double time;
    Site site;
    double label;
    // min-heap by (time, site): lexicographic site order breaks float ties
    bool operator>(const PendingEvent &o) const {
        if (time != o.time) return time > o.time;
        return site > o.site;
    }
};

Configuration initial_configuration(const SiteSet &region, const InitialDistribution &init,
                                    std::uint64_t seed) {
    Configuration config(region, LocalState(std::int64_t(0)));
    for (const Site &w : region) {
        UniformSequence us(seed, w, StreamKind::init);
        config.set(w, init.sample(us));
    }
    return config;
}

}  // namespace

Trajectory simulate_window(const JumpModel &model, const Window &A,
                           const InitialDistribution &init, double tau, std::uint64_t seed,
                           const SimulateOptions &opts) {
    if (tau < 0.0) throw ConfigError("horizon tau must be >= 0");
    const SiteSet region = neighborhood(A, model.tmpl);

    Trajectory traj;
    traj.horizon = tau;
    traj.initial = initial_configuration(region, init, seed);

    Configuration config = traj.initial;

    std::priority_queue<PendingEvent, std::vector<PendingEvent>, std::greater<>> queue;
    std::unordered_map<Site, EventStream::Cursor, SiteHash> cursors;
    cursors.reserve(A.size());
    for (const Site &v : A.sites()) {
        EventStream stream(seed, v, model.c_max);
        auto [it, _] = cursors.emplace(v, stream.cursor());
        auto [t, u] = it->second.next();
        if (t <= tau) queue.push({t, v, u});
    }

    std::size_t next_snapshot = 0;
    auto flush_snapshots = [&](double up_to_exclusive) {
        while (next_snapshot < opts.snapshot_times.size() &&
               opts.snapshot_times[next_snapshot] < up_to_exclusive) {
            traj.snapshots.push_back(config);
            ++next_snapshot;
        }
    };

    while (!queue.empty()) {
        PendingEvent ev = queue.top();
        queue.pop();
        flush_snapshots(ev.time);
        std::optional<Patch> before;
        if (opts.record_patches) before = config.patch(ev.site, model.tmpl);
        const bool jumped = apply_event(model, config, ev.site, ev.label);
        ++traj.processed_events;
        if (jumped) ++traj.jump_events;
        if (opts.record_events || opts.record_patches || opts.on_event) {
            Event rec{ev.time, ev.site, ev.label, jumped, std::move(before), std::nullopt};
            if (opts.record_patches) rec.after = config.patch(ev.site, model.tmpl);
            if (opts.on_event) opts.on_event(rec, config);
            if (opts.record_events || opts.record_patches) traj.events.push_back(std::move(rec));
        }
        auto it = cursors.find(ev.site);
        auto [t, u] = it->second.next();
        if (t <= tau) queue.push({t, ev.site, u});
    }
    flush_snapshots(std::numeric_limits<double>::infinity());

    traj.final_state = std::move(config);
    return traj;
}

std::vector<ArrivalRecord> materialize_arrivals(std::uint64_t seed, double c_max,
                                                const SiteSet &sites, double horizon) {
    std::vector<ArrivalRecord> out;
    for (const Site &v : sites) {
        EventStream stream(seed, v, c_max);
        for (auto [t, u] : stream.arrivals_until(horizon)) out.push_back({v, t});
    }
    return out;
}

SiteSet reaching_arrival_sites(const std::vector<ArrivalRecord> &arrivals,
                               const SiteSet &targets, double horizon,
                               const NeighborhoodTemplate &N) {
    // f(z) = latest time of an arrival at z lying on a directed path into the
    // target set; monotone worklist fixpoint.
    std::unordered_map<Site, std::vector<double>, SiteHash> times;
    for (const ArrivalRecord &a : arrivals) {
        if (a.time <= horizon) times[a.site].push_back(a.time);
    }
    for (auto &kv : times) std::sort(kv.second.begin(), kv.second.end());

    std::unordered_map<Site, double, SiteHash> f;
    std::vector<Site> work;
    for (const Site &z : targets) {
        auto it = times.find(z);
        if (it == times.end()) continue;
        f[z] = it->second.back();
        work.push_back(z);
    }

    const SiteSet two_nbhd = two_neighborhood(Site{0, 0, 0}, N);
    while (!work.empty()) {
        const Site z = work.back();
        work.pop_back();
        const double fz = f[z];
        // any arrival at u in N_z^+ strictly before fz is itself reaching
        for (const Site &o : two_nbhd) {
            const Site u = add(z, o);
            auto it = times.find(u);
            if (it == times.end()) continue;
            // largest arrival time of u strictly below fz
            auto lb = std::lower_bound(it->second.begin(), it->second.end(), fz);
            if (lb == it->second.begin()) continue;
            const double cand = *(lb - 1);
            auto fit = f.find(u);
            if (fit == f.end() || fit->second < cand) {
                f[u] = cand;
                work.push_back(u);
            }
        }
    }

    SiteSet out;
    out.reserve(f.size());
    for (const auto &kv : f) out.push_back(kv.first);
    sort_unique(out);
    return out;
}

SiteSet affecting_sites_from_arrivals(const std::vector<ArrivalRecord> &arrivals,
                                      const SiteSet &targets, double horizon,
                                      const NeighborhoodTemplate &N) {
    const SiteSet reaching = reaching_arrival_sites(arrivals, targets, horizon, N);
    // w affects the targets iff some reaching arrival lies in N_w^+;
    // by symmetry that is the 2-dilation of the reaching sites.
    SiteSet out;
    const SiteSet two_nbhd = two_neighborhood(Site{0, 0, 0}, N);
    for (const Site &z : reaching)
        for (const Site &o : two_nbhd) out.push_back(add(z, o));
    sort_unique(out);
    return out;
}

InfluenceCluster influence_cluster(std::uint64_t seed, double c_max, const Site &v, double tau,
                                   const SiteSet &region, const NeighborhoodTemplate &N) {
    const SiteSet targets = two_neighborhood(v, N);
    if (!is_subset(targets, region))
        throw RegionError("influence_cluster: 2-neighborhood of probe not inside region");
    const auto arrivals = materialize_arrivals(seed, c_max, region, tau);
    const SiteSet reaching = reaching_arrival_sites(arrivals, targets, tau, N);
    // Escape check: a reaching arrival whose 2-neighborhood leaves the region
    // could have unmaterialized predecessors.
    for (const Site &z : reaching) {
        for (const Site &o : two_neighborhood(Site{0, 0, 0}, N)) {
            if (!contains(region, add(z, o)))
                throw ClusterEscapeError(
                    "influence cluster reached the materialized boundary; enlarge the region");
        }
    }
    InfluenceCluster cluster;
    cluster.center = v;
    cluster.time = tau;
    cluster.members = affecting_sites_from_arrivals(arrivals, targets, tau, N);
    return cluster;
}

CoupledResult coupled_windows(const JumpModel &model, const Window &A, const Window &B,
                              const InitialDistribution &init, double tau, std::uint64_t seed,
                              const SiteSet &probes) {
    if (!is_subset(A.sites(), B.sites()))
        throw ConfigError("coupled_windows requires A to be a subset of B");
    CoupledResult result;
    result.inner = simulate_window(model, A, init, tau, seed);
    result.outer = simulate_window(model, B, init, tau, seed);

    // Differences between the two runs are driven only by the streams of
    // B \ A, so reverse reachability over B's arrivals decides containment.
    const auto arrivals = materialize_arrivals(seed, model.c_max, B.sites(), tau);
    for (const Site &v : probes) {
        CoupledProbeResult pr;
        pr.probe = v;
        const SiteSet targets = two_neighborhood(v, model.tmpl);
        const SiteSet cluster =
            affecting_sites_from_arrivals(arrivals, targets, tau, model.tmpl);
        pr.cluster_contained = is_subset(cluster, A.sites());
        pr.cluster_escaped = false;  // arrivals restricted to B cannot escape
        bool agree = true;
        for (const Site &o : model.tmpl.offsets()) {
            const Site w = add(v, o);
            if (!(result.inner.final_state.at(w) == result.outer.final_state.at(w))) {
                agree = false;
                break;
            }
        }
        pr.agree = agree;
        result.probes.push_back(pr);
    }
    return result;
}

void export_trajectory(const JumpModel &model, const Window &A, const InitialDistribution &init,
                       double tau, std::uint64_t seed, std::ostream &out) {
    SimulateOptions opts;
    opts.on_event = [&](const Event &ev, const Configuration &config) {
        std::ostringstream line;
        line.precision(17);
        line << "{\"t\":" << ev.time << ",\"site\":[";
        for (int i = 0; i < model.tmpl.dim(); ++i) {
            if (i) line << ",";
            line << ev.site[std::size_t(i)];
        }
        line << "],\"kind\":\"" << (ev.jumped ? "jump" : "thinned") << "\"";
        const LocalState &center = config.at(ev.site);
        if (is_height(center))
            line << ",\"center_height\":" << height_of(center);
        else
            line << ",\"center_points\":" << points_of(center).size();
        line << "}";
        out << line.str() << "\n";
    };
    simulate_window(model, A, init, tau, seed, opts);
}

}  // namespace ips
