#pragma once

#include <optional>

#include "ips/model.hpp"

namespace ips {

/// The jump-rate matrix of the windowed dynamics over an enumerated finite
/// state space: local states truncated to the model's candidate list, sites
/// outside the window frozen at the initial state. Transitions that leave
/// the truncated space are routed to an absorbing sink so their mass can be
/// reported rather than silently dropped.
class GeneratorMatrix {
public:
    GeneratorMatrix(const JumpModel &model, const Window &A, const InitialDistribution &init,
                    std::int64_t cap, std::size_t max_states = 4096);

    std::size_t size() const { return n_states_; }  // includes the sink
    std::size_t sink_index() const { return n_states_ - 1; }
    std::size_t initial_index() const { return initial_index_; }

    double diagonal(std::size_t i) const { return diag_[i]; }
    const std::vector<std::pair<std::size_t, double>> &transitions(std::size_t i) const {
        return rows_[i];
    }

    /// Dense copy of Q (small spaces only).
    std::vector<std::vector<double>> dense() const;

    /// Configuration over the materialized region for the enumerated state i.
    Configuration configuration(std::size_t i) const;

    /// Distribution at time t started from the point mass at the initial
    /// state (uniformization of exp(Qt)).
    std::vector<double> distribution_at(double t) const;

    /// Exact E[f(xi_t)] and the sink (truncation overflow) mass at t.
    std::pair<double, double> expectation(double t,
                                          const std::function<double(const Configuration &)> &f)
        const;

private:
    const JumpModel *model_;
    Window window_;
    SiteSet region_;
    std::vector<LocalState> local_states_;
    Configuration frozen_;  // boundary values (initial everywhere)
    std::size_t n_states_ = 0;
    std::size_t initial_index_ = 0;
    std::vector<double> diag_;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;

    std::size_t encode(const std::vector<std::size_t> &digits) const;
    std::vector<std::size_t> decode(std::size_t index) const;
    std::optional<std::size_t> state_index_of(const LocalState &s) const;
};

}  // namespace ips
