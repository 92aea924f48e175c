#pragma once

#include <optional>

#include "ips/model.hpp"

namespace ips {

/// Absolute tolerance for geometric contact tests, in ball-diameter units.
inline constexpr double kContactTol = 1e-9;

// ---- geometric cores (pure; shared by models, functionals and tests) ----

/// Squared distance from `pos` to the nearest of `points` (infinity if none).
double min_sq_dist_to(const std::array<double, kMaxDim> &pos,
                      const std::vector<PatchPoint> &points, int dim);

/// RSA acceptance: no existing point within unit distance of the arrival.
bool rsa_accepts(const std::array<double, kMaxDim> &pos, const std::vector<PatchPoint> &points,
                 int dim);

/// Center height of a unit ball dropped at horizontal position x: sticks to
/// the first ball it meets, or to the substrate at height 1/2.
double stick_drop_mark(const std::array<double, kMaxDim> &x,
                       const std::vector<PatchPoint> &points, int dim);

/// Monolayer rolling in d = 1. Returns the accepted substrate position, or
/// nullopt when the rolled particle is blocked. `tie` breaks exact midpoint
/// strikes (< 0.5 picks the left center).
std::optional<double> rolling_place_1d(double x, const std::vector<double> &centers, double tie);

/// Upper bound on how many points pairwise >= eps apart fit in a box of side
/// `side` in `dim` dimensions. Used to certify death/migration rate caps.
std::int64_t hard_core_cap(double side, double eps, int dim);

// ---- lattice models (Section-5 style growth on Z^d) ----

/// Ballistic deposition: a particle at v lands at 1 + the maximum height on
/// the neighborhood of v.
JumpModel lattice_bd(double lambda, int dim, int range = 1);

/// Deposition with surface relaxation: the particle seeks the lowest site of
/// the neighborhood (uniform tie-break) and adds 1 there.
JumpModel lattice_bd_relaxed(double lambda, int dim, int range = 1);

/// Independent two-state flip at every site (no interaction); the finite
/// chain used by the exact generator oracle.
JumpModel spin_flip(double rate, int dim = 1);

// ---- continuum models via the unit-cube embedding ----

struct RsaParams {
    double lambda = 1.0;
    double desorption = 0.0;  // per-particle death rate
    int dim = 1;
    double range = 1.0;  // interaction range R >= 1
};
JumpModel rsa(const RsaParams &p);

struct StickParams {
    double lambda = 1.0;
    int dim = 1;  // substrate dimension, 1 or 2
    double range = 1.0;
};
JumpModel multilayer_bd_stick(const StickParams &p);

struct RollingParams {
    double lambda = 1.0;
    double range = 2.0;  // >= 2: displacement bound 1 plus unit exclusion
};
JumpModel monolayer_bd_rolling_1d(const RollingParams &p);

struct ExclusionParams {
    double lambda = 1.0;       // per-particle jump attempt rate
    double eps = 0.5;          // hard-core spacing at the destination
    double jump_radius = 0.5;  // jumps are uniform in the ball of this radius
    int dim = 1;
};
JumpModel continuum_exclusion(const ExclusionParams &p);

struct ZeroRangeParams {
    double lambda = 1.0;  // default family: lambda_n = lambda / (n + 1)
    double eps = 0.5;
    double jump_radius = 0.5;
    int dim = 1;
    /// Optional custom family; must come with sup_n n*rate_fn(n) as
    /// `sup_n_rate` (the bounded-rate certificate).
    std::function<double(int)> rate_fn;
    double sup_n_rate = 0.0;
};
JumpModel zero_range(const ZeroRangeParams &p);

enum class VoterVariant { uniform_copy, nearest_copy };

struct VoterParams {
    double lambda = 1.0;
    double range = 1.0;   // neighbor search radius R
    double copy_prob = 1.0;  // variant I: probability of copying a neighbor
    VoterVariant variant = VoterVariant::uniform_copy;
    int dim = 1;
};
JumpModel voter_continuum(const VoterParams &p);

// ---- cube embedding of global marked point sets ----

struct GlobalPoint {
    std::array<double, kMaxDim> pos{0.0, 0.0, 0.0};
    double mark = 0.0;
};

/// Cube of a global position (componentwise floor).
Site cube_of(const std::array<double, kMaxDim> &pos, int dim);

/// Embeds a global marked point set as a Configuration over `region`
/// (cube-local coordinates). Points outside the region raise RegionError.
Configuration embed(const std::vector<GlobalPoint> &points, const SiteSet &region, int dim);

/// Inverse of embed over the materialized region.
std::vector<GlobalPoint> unembed(const Configuration &config, int dim);

}  // namespace ips
