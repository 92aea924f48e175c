#pragma once

#include <cstdint>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ips/geometry.hpp"

namespace ips {

/// One particle in cube-local coordinates. `mark` carries the model's mark:
/// center height for deposition models, a 0/1 color for voter models, and 0
/// where particles are unmarked.
struct MarkedPoint {
    std::array<double, kMaxDim> pos{0.0, 0.0, 0.0};  // in [0,1)^dim
    double mark = 0.0;

    friend bool operator==(const MarkedPoint &a, const MarkedPoint &b) {
        return a.pos == b.pos && a.mark == b.mark;
    }
};

using PointSet = std::vector<MarkedPoint>;

/// The local state at one site: a lattice height or a finite marked point
/// set in the site's unit cube.
using LocalState = std::variant<std::int64_t, PointSet>;

inline bool is_height(const LocalState &s) { return std::holds_alternative<std::int64_t>(s); }
inline std::int64_t height_of(const LocalState &s) { return std::get<std::int64_t>(s); }
inline const PointSet &points_of(const LocalState &s) { return std::get<PointSet>(s); }
inline PointSet &points_of(LocalState &s) { return std::get<PointSet>(s); }

/// States of one recentered neighborhood, parallel to the template offsets.
struct Patch {
    const NeighborhoodTemplate *tmpl = nullptr;
    std::vector<LocalState> states;

    const LocalState &at_offset(int idx) const { return states[std::size_t(idx)]; }
    const LocalState &center() const { return states[std::size_t(tmpl->center_index())]; }
    LocalState &center() { return states[std::size_t(tmpl->center_index())]; }

    friend bool operator==(const Patch &a, const Patch &b) { return a.states == b.states; }
};

/// A point of a continuum patch in patch coordinates (relative to the corner
/// of the center cube), together with where it lives in the patch.
struct PatchPoint {
    std::array<double, kMaxDim> pos{0.0, 0.0, 0.0};
    double mark = 0.0;
    int offset_index = 0;  // which cube of the patch
    int point_index = 0;   // index within that cube's PointSet
};

/// All points of a continuum patch, in canonical (offset, insertion) order.
std::vector<PatchPoint> patch_points(const Patch &patch);

double sq_dist(const std::array<double, kMaxDim> &a, const std::array<double, kMaxDim> &b,
               int dim);

/// Mapping from materialized sites to local states. The materialized region
/// is fixed at construction; reads outside it throw.
class Configuration {
public:
    Configuration() = default;
    Configuration(const SiteSet &region, const LocalState &fill);

    const SiteSet &region() const { return region_; }
    bool materialized(const Site &v) const { return states_.count(v) > 0; }
    const LocalState &at(const Site &v) const;
    void set(const Site &v, LocalState s);

    /// Recentered states on v + N. Throws RegionError if any site of the
    /// patch is unmaterialized.
    Patch patch(const Site &v, const NeighborhoodTemplate &N) const;
    /// Writes a patch back; touches exactly the sites v + N.
    void apply_patch(const Site &v, const NeighborhoodTemplate &N, const Patch &p);

    friend bool operator==(const Configuration &a, const Configuration &b);

private:
    SiteSet region_;
    std::unordered_map<Site, LocalState, SiteHash> states_;
};

}  // namespace ips
