#include "ips/generator.hpp"

#include <algorithm>
#include <cmath>

namespace ips {

GeneratorMatrix::GeneratorMatrix(const JumpModel &model, const Window &A,
                                 const InitialDistribution &init, std::int64_t cap,
                                 std::size_t max_states)
    : model_(&model), window_(A) {
    if (!model.enum_kernel || !model.enum_states)
        throw StateSpaceError(model.name + " does not support state-space enumeration");
    local_states_ = model.enum_states(cap);
    if (local_states_.empty()) throw StateSpaceError("empty local state candidate list");

    region_ = neighborhood(A, model.tmpl);
    frozen_ = Configuration(region_, model.default_state);
    for (const Site &w : region_) {
        UniformSequence us(0, w, StreamKind::init);
        const LocalState a = init.sample(us);
        UniformSequence us2(1, w, StreamKind::init);
        if (!(LocalState(init.sample(us2)) == a))
            throw StateSpaceError("enumeration requires a deterministic initial distribution");
        frozen_.set(w, a);
    }

    const std::size_t m = local_states_.size();
    double count = 1.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        count *= double(m);
        if (count > double(max_states))
            throw StateSpaceError("state space exceeds the cap of " +
                                  std::to_string(max_states) + " states");
    }
    const std::size_t n = std::size_t(count);
    n_states_ = n + 1;  // + absorbing sink

    // initial state must lie inside the candidate list
    {
        std::vector<std::size_t> digits(A.size());
        for (std::size_t si = 0; si < A.size(); ++si) {
            const auto idx = state_index_of(frozen_.at(A.sites()[si]));
            if (!idx) throw StateSpaceError("initial state outside the truncated space");
            digits[si] = *idx;
        }
        initial_index_ = encode(digits);
    }

    diag_.assign(n_states_, 0.0);
    rows_.assign(n_states_, {});
    for (std::size_t i = 0; i < n; ++i) {
        const Configuration config = configuration(i);
        double out_rate = 0.0;
        for (const Site &v : window_.sites()) {
            const Patch patch = config.patch(v, model.tmpl);
            const double total = model.rate(patch);
            const auto transitions = model.enum_kernel(patch);
            double kernel_sum = 0.0;
            for (const auto &[next, rate] : transitions) {
                kernel_sum += rate;
                // the enumerated space covers only window sites
                std::vector<std::size_t> digits = decode(i);
                bool to_sink = false;
                const auto &offs = model.tmpl.offsets();
                for (std::size_t oi = 0; oi < offs.size(); ++oi) {
                    if (next.states[oi] == patch.states[oi]) continue;
                    const Site w = add(v, offs[oi]);
                    if (!window_.contains_site(w))
                        throw StateSpaceError(
                            model.name + ": transition writes outside the window; not enumerable");
                    const auto idx = state_index_of(next.states[oi]);
                    if (!idx) {
                        to_sink = true;
                        break;
                    }
                    const auto pos = std::lower_bound(window_.sites().begin(),
                                                      window_.sites().end(), w) -
                                     window_.sites().begin();
                    digits[std::size_t(pos)] = *idx;
                }
                const std::size_t j = to_sink ? sink_index() : encode(digits);
                if (j == i) continue;
                rows_[i].emplace_back(j, rate);
                out_rate += rate;
            }
            if (std::abs(kernel_sum - total) > 1e-9 * std::max(1.0, total))
                throw StateSpaceError(model.name +
                                      ": enumeration kernel rates do not sum to the local rate");
        }
        diag_[i] = -out_rate;
    }
}

std::size_t GeneratorMatrix::encode(const std::vector<std::size_t> &digits) const {
    std::size_t idx = 0;
    for (std::size_t i = digits.size(); i-- > 0;) idx = idx * local_states_.size() + digits[i];
    return idx;
}

std::vector<std::size_t> GeneratorMatrix::decode(std::size_t index) const {
    std::vector<std::size_t> digits(window_.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        digits[i] = index % local_states_.size();
        index /= local_states_.size();
    }
    return digits;
}

std::optional<std::size_t> GeneratorMatrix::state_index_of(const LocalState &s) const {
    for (std::size_t i = 0; i < local_states_.size(); ++i)
        if (local_states_[i] == s) return i;
    return std::nullopt;
}

std::vector<std::vector<double>> GeneratorMatrix::dense() const {
    if (n_states_ > 65)
        throw StateSpaceError("dense() is meant for small spaces");
    std::vector<std::vector<double>> Q(n_states_, std::vector<double>(n_states_, 0.0));
    for (std::size_t i = 0; i < n_states_; ++i) {
        Q[i][i] = diag_[i];
        for (const auto &[j, rate] : rows_[i]) Q[i][j] += rate;
    }
    return Q;
}

Configuration GeneratorMatrix::configuration(std::size_t i) const {
    Configuration config = frozen_;
    const auto digits = decode(i);
    for (std::size_t si = 0; si < window_.size(); ++si)
        config.set(window_.sites()[si], local_states_[digits[si]]);
    return config;
}

std::vector<double> GeneratorMatrix::distribution_at(double t) const {
    std::vector<double> pi(n_states_, 0.0);
    pi[initial_index_] = 1.0;
    if (t <= 0.0) return pi;

    double rate_max = 0.0;
    for (double d : diag_) rate_max = std::max(rate_max, -d);
    if (rate_max == 0.0) return pi;
    const double lt = rate_max * t;
    if (lt > 700.0) throw StateSpaceError("uniformization horizon too large");

    std::vector<double> result(n_states_, 0.0);
    std::vector<double> next(n_states_, 0.0);
    double weight = std::exp(-lt);
    double cumulative = weight;
    for (std::size_t s = 0; s < n_states_; ++s) result[s] = weight * pi[s];
    for (std::size_t k = 1;; ++k) {
        // pi <- pi * (I + Q / rate_max)
        for (std::size_t s = 0; s < n_states_; ++s)
            next[s] = pi[s] * (1.0 + diag_[s] / rate_max);
        for (std::size_t s = 0; s < n_states_; ++s) {
            if (pi[s] == 0.0) continue;
            for (const auto &[j, rate] : rows_[s]) next[j] += pi[s] * rate / rate_max;
        }
        pi.swap(next);
        weight *= lt / double(k);
        cumulative += weight;
        for (std::size_t s = 0; s < n_states_; ++s) result[s] += weight * pi[s];
        if (cumulative >= 1.0 - 1e-14 && k > std::size_t(lt)) break;
        if (k > 100000) throw StateSpaceError("uniformization failed to converge");
    }
    return result;
}

std::pair<double, double> GeneratorMatrix::expectation(
    double t, const std::function<double(const Configuration &)> &f) const {
    const auto dist = distribution_at(t);
    double mean = 0.0;
    for (std::size_t i = 0; i + 1 < n_states_; ++i) {
        if (dist[i] == 0.0) continue;
        mean += dist[i] * f(configuration(i));
    }
    return {mean, dist[sink_index()]};
}

}  // namespace ips
