#include "ips/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ips {

void sort_unique(SiteSet &sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
}

bool contains(const SiteSet &sorted, const Site &v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

SiteSet set_union(const SiteSet &a, const SiteSet &b) {
    SiteSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

SiteSet set_difference(const SiteSet &a, const SiteSet &b) {
    SiteSet out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const SiteSet &a, const SiteSet &b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string to_string(const Site &v, int dim) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < dim; ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << ")";
    return os.str();
}

NeighborhoodTemplate::NeighborhoodTemplate(int dim, SiteSet offsets) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
        throw ConfigError("template dimension must be in [1," + std::to_string(kMaxDim) + "]");
    sort_unique(offsets);
    offsets_ = std::move(offsets);
    if (offsets_.empty()) throw ConfigError("template must be non-empty");
    for (const Site &o : offsets_) {
        for (int i = dim; i < kMaxDim; ++i)
            if (o[i] != 0) throw ConfigError("template offset uses coordinates beyond dim");
        if (!contains(offsets_, negate(o)))
            throw ConfigError("template must be symmetric: missing -" + to_string(o, dim));
    }
    const Site zero{0, 0, 0};
    if (!contains(offsets_, zero)) throw ConfigError("template must contain the origin");
    center_index_ = index_of(zero);
}

NeighborhoodTemplate NeighborhoodTemplate::box(int dim, int range) {
    if (range < 0) throw ConfigError("box template range must be >= 0");
    SiteSet offs;
    Site o{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            offs.push_back(o);
            return;
        }
        for (int c = -range; c <= range; ++c) {
            o[axis] = c;
            rec(axis + 1);
        }
        o[axis] = 0;
    };
    rec(0);
    return NeighborhoodTemplate(dim, std::move(offs));
}

NeighborhoodTemplate NeighborhoodTemplate::cube_reach(int dim, double reach) {
    if (reach < 0) throw ConfigError("cube reach must be >= 0");
    const int span = int(std::ceil(reach));
    SiteSet offs;
    Site o{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            // Euclidean distance between the unit cubes at 0 and o
            double d2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                double g = std::max(0.0, std::abs(double(o[i])) - 1.0);
                d2 += g * g;
            }
            if (d2 <= reach * reach + 1e-12) offs.push_back(o);
            return;
        }
        for (int c = -span; c <= span; ++c) {
            o[axis] = c;
            rec(axis + 1);
        }
        o[axis] = 0;
    };
    rec(0);
    return NeighborhoodTemplate(dim, std::move(offs));
}

int NeighborhoodTemplate::index_of(const Site &off) const {
    auto it = std::lower_bound(offsets_.begin(), offsets_.end(), off);
    if (it == offsets_.end() || *it != off) return -1;
    return int(it - offsets_.begin());
}

Window::Window(SiteSet sites) {
    sort_unique(sites);
    sites_ = std::move(sites);
    if (sites_.empty()) throw ConfigError("window must be non-empty");
}

Window Window::box(int dim, int radius) {
    if (radius < 0) throw ConfigError("window radius must be >= 0");
    SiteSet sites;
    Site s{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            sites.push_back(s);
            return;
        }
        for (int c = -radius; c <= radius; ++c) {
            s[axis] = c;
            rec(axis + 1);
        }
        s[axis] = 0;
    };
    rec(0);
    return Window(std::move(sites));
}

SiteSet neighborhood_of_sites(const SiteSet &A, const NeighborhoodTemplate &N) {
    SiteSet out;
    out.reserve(A.size() * N.size());
    for (const Site &v : A)
        for (const Site &o : N.offsets()) out.push_back(add(v, o));
    sort_unique(out);
    return out;
}

SiteSet neighborhood(const Window &A, const NeighborhoodTemplate &N) {
    return neighborhood_of_sites(A.sites(), N);
}

SiteSet exterior_boundary(const Window &A, const NeighborhoodTemplate &N) {
    return set_difference(neighborhood(A, N), A.sites());
}

SiteSet interior(const Window &A, const NeighborhoodTemplate &N) {
    // Valid form for symmetric N: v is interior iff its whole neighborhood
    // stays inside A.
    SiteSet out;
    for (const Site &v : A.sites()) {
        bool inside = true;
        for (const Site &o : N.offsets()) {
            if (!contains(A.sites(), add(v, o))) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(v);
    }
    return out;
}

SiteSet two_neighborhood(const Site &v, const NeighborhoodTemplate &N) {
    SiteSet one = neighborhood_of_sites(SiteSet{v}, N);
    return neighborhood_of_sites(one, N);
}

int graph_distance(const Site &from, const Site &to, const NeighborhoodTemplate &N,
                   int max_dist) {
    if (from == to) return 0;
    std::unordered_map<Site, int, SiteHash> dist;
    dist[from] = 0;
    std::deque<Site> queue{from};
    while (!queue.empty()) {
        Site u = queue.front();
        queue.pop_front();
        int du = dist[u];
        if (du >= max_dist) continue;
        for (const Site &o : N.offsets()) {
            if (o == Site{0, 0, 0}) continue;
            Site w = add(u, o);
            if (dist.count(w)) continue;
            if (w == to) return du + 1;
            dist[w] = du + 1;
            queue.push_back(w);
        }
    }
    return max_dist + 1;
}

SiteSet graph_ball(const Site &center, const NeighborhoodTemplate &N, int radius) {
    std::unordered_map<Site, int, SiteHash> dist;
    dist[center] = 0;
    std::deque<Site> queue{center};
    while (!queue.empty()) {
        Site u = queue.front();
        queue.pop_front();
        int du = dist[u];
        if (du >= radius) continue;
        for (const Site &o : N.offsets()) {
            if (o == Site{0, 0, 0}) continue;
            Site w = add(u, o);
            if (dist.count(w)) continue;
            dist[w] = du + 1;
            queue.push_back(w);
        }
    }
    SiteSet out;
    out.reserve(dist.size());
    for (const auto &kv : dist) out.push_back(kv.first);
    sort_unique(out);
    return out;
}

WindowSequenceReport check_window_sequence(const std::vector<Window> &windows,
                                           const NeighborhoodTemplate &N) {
    if (windows.empty()) throw ConfigError("window sequence must be non-empty");
    WindowSequenceReport report;
    report.ratio_decreasing = true;
    report.all_interior_consistent = true;
    double prev_ratio = -1.0;
    for (const Window &A : windows) {
        WindowSequenceEntry e;
        e.window_size = A.size();
        SiteSet bd = exterior_boundary(A, N);
        e.boundary_size = bd.size();
        e.boundary_ratio = double(bd.size()) / double(A.size());
        Window nA(neighborhood(A, N));
        e.interior_consistent = (interior(nA, N) == A.sites());
        if (prev_ratio >= 0.0 && e.boundary_ratio >= prev_ratio) report.ratio_decreasing = false;
        prev_ratio = e.boundary_ratio;
        report.all_interior_consistent &= e.interior_consistent;
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace ips
