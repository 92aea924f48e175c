#include <doctest.h>

#include <set>

#include "ips/geometry.hpp"
#include "ips/rng.hpp"

using namespace ips;

namespace {

// Independent enumeration oracle: dilate A by N with plain nested loops.
SiteSet dilate_oracle(const SiteSet &A, const SiteSet &offsets) {
    std::set<Site> acc;
    for (const Site &v : A)
        for (const Site &o : offsets) acc.insert(add(v, o));
    return SiteSet(acc.begin(), acc.end());
}

SiteSet interval(int lo, int hi) {
    SiteSet out;
    for (int c = lo; c <= hi; ++c) out.push_back(make_site({c}));
    return out;
}

}  // namespace

TEST_CASE("template construction enforces symmetry and the origin") {
    CHECK_THROWS_AS(NeighborhoodTemplate(1, SiteSet{make_site({-1}), make_site({1})}),
                    ConfigError);
    CHECK_THROWS_AS(NeighborhoodTemplate(1, SiteSet{make_site({0}), make_site({1})}),
                    ConfigError);
    const auto N = NeighborhoodTemplate::box(1, 1);
    CHECK(N.size() == 3);
    CHECK(N.degree() == 2);
    CHECK(N.offsets()[std::size_t(N.center_index())] == make_site({0}));
}

TEST_CASE("neighborhood of an interval") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    const Window A(interval(0, 9));
    CHECK(neighborhood(A, N) == interval(-1, 10));

    const auto id = NeighborhoodTemplate::box(1, 0);
    const Window single(SiteSet{make_site({0})});
    CHECK(neighborhood(single, id) == SiteSet{make_site({0})});
}

TEST_CASE("neighborhood of a 3x3 box against the enumeration oracle") {
    const auto N = NeighborhoodTemplate::box(2, 1);
    const Window A(Window::box(2, 1));
    const SiteSet got = neighborhood(A, N);
    CHECK(got == dilate_oracle(A.sites(), N.offsets()));
    CHECK(got == Window::box(2, 2).sites());  // 5x5 box
}

TEST_CASE("exterior boundary") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    CHECK(exterior_boundary(Window(interval(0, 9)), N) ==
          SiteSet{make_site({-1}), make_site({10})});
    CHECK(exterior_boundary(Window(SiteSet{make_site({0})}), N) ==
          SiteSet{make_site({-1}), make_site({1})});

    const auto N2 = NeighborhoodTemplate::box(2, 1);
    const Window box3(Window::box(2, 1));
    const SiteSet ring = exterior_boundary(box3, N2);
    CHECK(ring.size() == 16);
    CHECK(ring == set_difference(dilate_oracle(box3.sites(), N2.offsets()), box3.sites()));
    // disjointness and union recover the neighborhood
    for (const Site &v : ring) CHECK(!box3.contains_site(v));
    CHECK(set_union(ring, box3.sites()) == neighborhood(box3, N2));
}

TEST_CASE("interior") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    CHECK(interior(Window(interval(0, 9)), N) == interval(1, 8));
    CHECK(interior(Window(SiteSet{make_site({0})}), N).empty());

    const auto N2 = NeighborhoodTemplate::box(2, 1);
    CHECK(interior(Window::box(2, 2), N2) == Window::box(2, 1).sites());  // 5x5 -> 3x3
}

TEST_CASE("interior sites have their whole neighborhood inside") {
    const auto N = NeighborhoodTemplate::box(2, 1);
    // L-shaped window
    SiteSet sites;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 2; ++y) sites.push_back(make_site({x, y}));
    for (int y = 2; y < 5; ++y) sites.push_back(make_site({0, y}));
    const Window L(sites);
    const SiteSet inner = interior(L, N);
    for (const Site &v : L.sites()) {
        bool whole = true;
        for (const Site &o : N.offsets())
            if (!L.contains_site(add(v, o))) whole = false;
        CHECK(whole == contains(inner, v));
    }
}

TEST_CASE("monotonicity of neighborhood and interior") {
    const auto N = NeighborhoodTemplate::box(2, 1);
    std::uint64_t state = 42;
    auto next_u = [&state] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return double(state >> 11) * 0x1.0p-53;
    };
    for (int trial = 0; trial < 20; ++trial) {
        SiteSet a, b;
        for (int x = -3; x <= 3; ++x) {
            for (int y = -3; y <= 3; ++y) {
                const bool in_b = next_u() < 0.5;
                if (in_b) {
                    b.push_back(make_site({x, y}));
                    if (next_u() < 0.5) a.push_back(make_site({x, y}));
                }
            }
        }
        if (a.empty() || b.empty()) continue;
        const Window A(a), B(b);
        CHECK(is_subset(neighborhood(A, N), neighborhood(B, N)));
        CHECK(is_subset(interior(A, N), interior(B, N)));
    }
}

TEST_CASE("two-neighborhood") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    CHECK(two_neighborhood(make_site({0}), N) == interval(-2, 2));
    const auto id = NeighborhoodTemplate::box(1, 0);
    CHECK(two_neighborhood(make_site({0}), id) == SiteSet{make_site({0})});

    const auto N2 = NeighborhoodTemplate::box(2, 1);
    const SiteSet got = two_neighborhood(make_site({0, 0}), N2);
    CHECK(got == Window::box(2, 2).sites());
    CHECK(got == dilate_oracle(dilate_oracle(SiteSet{make_site({0, 0})}, N2.offsets()),
                               N2.offsets()));
    // degree bound: |N_v^+| <= 1 + D^2
    CHECK(got.size() <= std::size_t(1 + N2.degree() * N2.degree()));
}

TEST_CASE("window sequence conditions for boxes") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    std::vector<Window> windows{Window::box(1, 2), Window::box(1, 4), Window::box(1, 8)};
    const auto report = check_window_sequence(windows, N);
    CHECK(report.all_interior_consistent);
    CHECK(report.ratio_decreasing);
    CHECK(report.entries[0].boundary_ratio == doctest::Approx(2.0 / 5.0));

    // single site: (N_A)^o == A and ratio 2
    const auto single = check_window_sequence({Window(SiteSet{make_site({0})})}, N);
    CHECK(single.entries[0].interior_consistent);
    CHECK(single.entries[0].boundary_ratio == doctest::Approx(2.0));
}

TEST_CASE("window sequence on an L-shape reports the enumerated ratio") {
    const auto N = NeighborhoodTemplate::box(2, 1);
    SiteSet sites;
    for (int x = 0; x < 4; ++x) sites.push_back(make_site({x, 0}));
    for (int y = 1; y < 3; ++y) sites.push_back(make_site({0, y}));
    const Window L(sites);
    const auto report = check_window_sequence({L}, N);
    const SiteSet oracle_bd = set_difference(dilate_oracle(L.sites(), N.offsets()), L.sites());
    CHECK(report.entries[0].boundary_size == oracle_bd.size());
    CHECK(report.entries[0].boundary_ratio ==
          doctest::Approx(double(oracle_bd.size()) / double(L.size())));
    // (N_L)^o == L from enumeration
    const Window NL(dilate_oracle(L.sites(), N.offsets()));
    CHECK(report.entries[0].interior_consistent == (interior(NL, N) == L.sites()));
}

TEST_CASE("graph distance and ball") {
    const auto N = NeighborhoodTemplate::box(1, 1);
    CHECK(graph_distance(make_site({0}), make_site({5}), N, 10) == 5);
    CHECK(graph_distance(make_site({0}), make_site({-3}), N, 10) == 3);
    CHECK(graph_distance(make_site({0}), make_site({7}), N, 3) == 4);  // capped
    CHECK(graph_ball(make_site({0}), N, 2) == interval(-2, 2));

    const auto N2 = NeighborhoodTemplate::box(2, 1);
    CHECK(graph_distance(make_site({0, 0}), make_site({3, -2}), N2, 10) == 3);  // Chebyshev
}
