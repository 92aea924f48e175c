#include "ips/state.hpp"

namespace ips {

std::vector<PatchPoint> patch_points(const Patch &patch) {
    std::vector<PatchPoint> out;
    const auto &offs = patch.tmpl->offsets();
    for (std::size_t oi = 0; oi < offs.size(); ++oi) {
        const PointSet &pts = points_of(patch.states[oi]);
        for (std::size_t pi = 0; pi < pts.size(); ++pi) {
            PatchPoint pp;
            for (int a = 0; a < kMaxDim; ++a) pp.pos[a] = double(offs[oi][a]) + pts[pi].pos[a];
            pp.mark = pts[pi].mark;
            pp.offset_index = int(oi);
            pp.point_index = int(pi);
            out.push_back(pp);
        }
    }
    return out;
}

double sq_dist(const std::array<double, kMaxDim> &a, const std::array<double, kMaxDim> &b,
               int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

Configuration::Configuration(const SiteSet &region, const LocalState &fill) : region_(region) {
    states_.reserve(region.size());
    for (const Site &v : region) states_.emplace(v, fill);
}

const LocalState &Configuration::at(const Site &v) const {
    auto it = states_.find(v);
    if (it == states_.end())
        throw RegionError("site " + to_string(v, kMaxDim) + " is not materialized");
    return it->second;
}

void Configuration::set(const Site &v, LocalState s) {
    auto it = states_.find(v);
    if (it == states_.end())
        throw RegionError("site " + to_string(v, kMaxDim) + " is not materialized");
    it->second = std::move(s);
}

Patch Configuration::patch(const Site &v, const NeighborhoodTemplate &N) const {
    Patch p;
    p.tmpl = &N;
    p.states.reserve(N.size());
    for (const Site &o : N.offsets()) p.states.push_back(at(add(v, o)));
    return p;
}

void Configuration::apply_patch(const Site &v, const NeighborhoodTemplate &N, const Patch &p) {
    const auto &offs = N.offsets();
    for (std::size_t i = 0; i < offs.size(); ++i) set(add(v, offs[i]), p.states[i]);
}

bool operator==(const Configuration &a, const Configuration &b) {
    return a.region_ == b.region_ && a.states_ == b.states_;
}

}  // namespace ips
