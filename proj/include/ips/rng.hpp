#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "ips/geometry.hpp"

namespace ips {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Every 128-bit counter maps independently to 128 random bits, so any
/// (seed, site, index) triple can be materialized lazily and out of order.
struct Philox4x32 {
    static constexpr std::uint32_t kW32A = 0x9E3779B9u;
    static constexpr std::uint32_t kW32B = 0xBB67AE85u;
    static constexpr std::uint32_t kM4x32A = 0xD2511F53u;
    static constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kM4x32A) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kM4x32B) * ctr[2];
            const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kW32A;
            key[1] += kW32B;
        }
        return ctr;
    }
};

/// Uniform in [0,1) from 64 random bits (53-bit resolution).
inline double u64_to_unit(std::uint64_t x) {
    return double(x >> 11) * 0x1.0p-53;
}

/// Uniform strictly inside (0,1); safe for logarithms.
inline double u64_to_unit_open(std::uint64_t x) {
    return (double(x >> 12) + 0.5) * 0x1.0p-52;
}

/// Stream kinds keyed into the counter so event labels, initial-state draws
/// and auxiliary draws never collide.
enum class StreamKind : std::uint32_t {
    events = 1,
    init = 2,
};

/// The two 64-bit outputs of the (seed, site, kind, index) counter block.
inline std::array<std::uint64_t, 2> site_block(std::uint64_t seed, const Site &v,
                                               StreamKind kind, std::uint32_t index) {
    const std::array<std::uint32_t, 4> ctr{
        std::uint32_t(v[0]), std::uint32_t(v[1]), std::uint32_t(v[2]),
        (std::uint32_t(kind) << 28) | (index & 0x0FFFFFFFu)};
    const std::array<std::uint32_t, 2> key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    return {(std::uint64_t(out[0]) << 32) | out[1], (std::uint64_t(out[2]) << 32) | out[3]};
}

/// Deterministic sequence of i.i.d. uniforms scoped to one (seed, site, kind).
class UniformSequence {
public:
    UniformSequence(std::uint64_t seed, const Site &v, StreamKind kind)
        : seed_(seed), site_(v), kind_(kind) {}

    double next() {
        const auto b = site_block(seed_, site_, kind_, index_++);
        if (lane_ == 0) {
            lane_ = 1;
            pending_ = b[1];
            return u64_to_unit(b[0]);
        }
        return u64_to_unit(b[0]);
    }

private:
    std::uint64_t seed_;
    Site site_;
    StreamKind kind_;
    std::uint32_t index_ = 0;
    int lane_ = 0;
    std::uint64_t pending_ = 0;
};

/// Per-site Poisson event stream of (arrival time, uniform label) pairs at
/// the model's thinning rate. The i-th pair is a pure function of
/// (seed, site, i), which makes window couplings exact by construction.
class EventStream {
public:
    EventStream(std::uint64_t seed, const Site &v, double rate)
        : seed_(seed), site_(v), rate_(rate) {
        if (!(rate > 0.0)) throw ConfigError("event stream rate must be > 0");
    }

    const Site &site() const { return site_; }
    double rate() const { return rate_; }

    /// Arrival i (1-based): strictly increasing times, label in [0,1).
    std::pair<double, double> arrival(std::uint32_t i) const {
        double t = 0.0;
        double label = 0.0;
        for (std::uint32_t k = 1; k <= i; ++k) {
            const auto b = site_block(seed_, site_, StreamKind::events, k);
            t += -std::log(u64_to_unit_open(b[0])) / rate_;
            label = u64_to_unit(b[1]);
        }
        return {t, label};
    }

    /// Sequential cursor over the arrivals. Self-contained value type.
    class Cursor {
    public:
        Cursor(std::uint64_t seed, Site v, double rate) : seed_(seed), site_(v), rate_(rate) {}
        std::pair<double, double> next() {
            const auto b = site_block(seed_, site_, StreamKind::events, ++index_);
            time_ += -std::log(u64_to_unit_open(b[0])) / rate_;
            return {time_, u64_to_unit(b[1])};
        }

    private:
        std::uint64_t seed_;
        Site site_;
        double rate_;
        std::uint32_t index_ = 0;
        double time_ = 0.0;
    };

    Cursor cursor() const { return Cursor(seed_, site_, rate_); }

    /// All arrivals (time, label) with time <= horizon.
    std::vector<std::pair<double, double>> arrivals_until(double horizon) const {
        std::vector<std::pair<double, double>> out;
        Cursor c = cursor();
        for (;;) {
            auto [t, u] = c.next();
            if (t > horizon) break;
            out.emplace_back(t, u);
        }
        return out;
    }

private:
    std::uint64_t seed_;
    Site site_;
    double rate_;
};

/// Expands one event label into the sequence of uniforms an outcome sampler
/// may need. The first draw is the (rescaled) label itself; further draws are
/// derived from its bit pattern with a splitmix64 chain.
class LabelStream {
public:
    explicit LabelStream(double label) : first_(label) {
        std::memcpy(&state_, &label, sizeof state_);
        state_ ^= 0xD1B54A32D192ED03ull;
    }

    double next() {
        if (!used_first_) {
            used_first_ = true;
            return first_;
        }
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return u64_to_unit(z ^ (z >> 31));
    }

private:
    double first_;
    bool used_first_ = false;
    std::uint64_t state_;
};

/// Seed for replicate k of a plan, derived splitmix-style so replicates are
/// independent of worker scheduling.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace ips
