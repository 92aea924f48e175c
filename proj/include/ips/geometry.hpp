#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ips/errors.hpp"

namespace ips {

inline constexpr int kMaxDim = 3;

/// A lattice site. Coordinates beyond the experiment's dimension stay zero,
/// so sites of any dimension d <= kMaxDim compare and hash uniformly.
using Site = std::array<std::int32_t, kMaxDim>;

inline Site make_site(std::initializer_list<std::int32_t> coords) {
    Site s{0, 0, 0};
    int i = 0;
    for (auto c : coords) {
        if (i >= kMaxDim) throw ConfigError("site has too many coordinates");
        s[i++] = c;
    }
    return s;
}

inline Site add(const Site &a, const Site &b) {
    return Site{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Site negate(const Site &a) {
    return Site{-a[0], -a[1], -a[2]};
}

struct SiteHash {
    std::size_t operator()(const Site &s) const noexcept {
        // splitmix64 finalizer over the packed coordinates
        std::uint64_t h = (std::uint64_t(std::uint32_t(s[0])) << 32) ^
                          (std::uint64_t(std::uint32_t(s[1])) << 11) ^
                          std::uint64_t(std::uint32_t(s[2]));
        h += 0x9E3779B97F4A7C15ull;
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
        h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
        return std::size_t(h ^ (h >> 31));
    }
};

/// A finite set of sites in canonical (lexicographically sorted) order.
using SiteSet = std::vector<Site>;

void sort_unique(SiteSet &sites);
bool contains(const SiteSet &sorted, const Site &v);
SiteSet set_union(const SiteSet &a, const SiteSet &b);
SiteSet set_difference(const SiteSet &a, const SiteSet &b);
bool is_subset(const SiteSet &a, const SiteSet &b);

std::string to_string(const Site &v, int dim);

/// The finite symmetric interaction window around the origin. Immutable
/// after construction; symmetry and 0-membership are checked here so that
/// interior(A) = {v in A : v + offsets subset of A} is valid downstream.
class NeighborhoodTemplate {
public:
    NeighborhoodTemplate(int dim, SiteSet offsets);

    /// Box template: all offsets with max-norm <= range.
    static NeighborhoodTemplate box(int dim, int range);

    /// Continuum cube template: all offsets v such that the Euclidean distance
    /// between the unit cubes at 0 and v is at most reach.
    static NeighborhoodTemplate cube_reach(int dim, double reach);

    int dim() const { return dim_; }
    const SiteSet &offsets() const { return offsets_; }
    std::size_t size() const { return offsets_.size(); }
    /// Degree bound D: neighbors excluding the site itself.
    int degree() const { return int(offsets_.size()) - 1; }
    int center_index() const { return center_index_; }
    /// Index of `off` in offsets(), or -1.
    int index_of(const Site &off) const;

private:
    int dim_;
    SiteSet offsets_;
    int center_index_;
};

/// A finite non-empty window of sites.
class Window {
public:
    explicit Window(SiteSet sites);

    /// The box ([-radius, radius] \cap Z)^dim.
    static Window box(int dim, int radius);

    const SiteSet &sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    bool contains_site(const Site &v) const { return contains(sites_, v); }

private:
    SiteSet sites_;
};

// Set operators derived from the template: neighbourhood, exterior boundary,
// interior, and the 2-neighbourhood.
SiteSet neighborhood(const Window &A, const NeighborhoodTemplate &N);
SiteSet neighborhood_of_sites(const SiteSet &A, const NeighborhoodTemplate &N);
SiteSet exterior_boundary(const Window &A, const NeighborhoodTemplate &N);
SiteSet interior(const Window &A, const NeighborhoodTemplate &N);
SiteSet two_neighborhood(const Site &v, const NeighborhoodTemplate &N);

/// Graph distance induced by N-adjacency, computed by BFS from `from` out to
/// at most `max_dist`. Returns max_dist + 1 when `to` is farther than that.
int graph_distance(const Site &from, const Site &to, const NeighborhoodTemplate &N,
                   int max_dist);

/// All sites within graph distance `radius` of `center`.
SiteSet graph_ball(const Site &center, const NeighborhoodTemplate &N, int radius);

struct WindowSequenceEntry {
    std::size_t window_size = 0;
    std::size_t boundary_size = 0;
    double boundary_ratio = 0.0;  // |ext boundary| / |A|
    bool interior_consistent = false;  // (N_A)^o == A
};

struct WindowSequenceReport {
    std::vector<WindowSequenceEntry> entries;
    bool ratio_decreasing = false;
    bool all_interior_consistent = false;
};

/// Checks the window-sequence conditions behind the limit theorems:
/// vanishing boundary-to-volume ratio and interior consistency.
WindowSequenceReport check_window_sequence(const std::vector<Window> &windows,
                                           const NeighborhoodTemplate &N);

}  // namespace ips
