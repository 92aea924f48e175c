#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ips/rng.hpp"
#include "ips/state.hpp"

namespace ips {

/// A jump model: declared rate bound, total local rate, and the outcome
/// sampler for the thinned kernel. Immutable after construction and safe to
/// share across concurrent runs.
struct JumpModel {
    std::string name;
    NeighborhoodTemplate tmpl;
    double c_max = 0.0;

    /// Total jump rate for a recentered patch; must never exceed c_max.
    std::function<double(const Patch &)> rate;

    /// Rewrites the patch in place with a sample of the jump law. Called only
    /// when the thinning selects a jump; draws from the label stream.
    std::function<void(Patch &, LabelStream &)> outcome;

    /// The zero/empty state of this model's local state space.
    LocalState default_state;

    /// Optional exact transition list for finite-state-space enumeration:
    /// (new patch, rate) pairs whose rates sum to rate(patch). Used by the
    /// generator-matrix oracle.
    std::function<std::vector<std::pair<Patch, double>>(const Patch &)> enum_kernel;

    /// Optional candidate local states for enumeration, given a truncation
    /// cap (e.g. heights 0..cap).
    std::function<std::vector<LocalState>(std::int64_t cap)> enum_states;

    JumpModel(std::string name_, NeighborhoodTemplate tmpl_, double c_max_)
        : name(std::move(name_)), tmpl(std::move(tmpl_)), c_max(c_max_) {
        if (!(c_max > 0.0)) throw ConfigError("c_max must be > 0");
    }
};

/// Per-site i.i.d. initial distribution. Sampling consumes uniforms from a
/// sequence scoped to (seed, site), so the draw is shared exactly between
/// coupled runs.
struct InitialDistribution {
    std::string name;
    std::function<LocalState(UniformSequence &)> sample;

    static InitialDistribution deterministic(std::string name, LocalState state) {
        InitialDistribution d;
        d.name = std::move(name);
        d.sample = [state](UniformSequence &) { return state; };
        return d;
    }

    /// Empty/zero state of the given model family.
    static InitialDistribution empty_for(const JumpModel &model) {
        return deterministic("empty", model.default_state);
    }

    /// One unmarked particle at the cube center (continuum models).
    static InitialDistribution center_point(int dim) {
        MarkedPoint p;
        for (int i = 0; i < dim; ++i) p.pos[std::size_t(i)] = 0.5;
        return deterministic("center_point", PointSet{p});
    }
};

}  // namespace ips
