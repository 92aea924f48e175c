#include <doctest.h>

#include <cmath>

#include "ips/engine.hpp"
#include "ips/functionals.hpp"
#include "ips/registry.hpp"

using namespace ips;

namespace {

std::uint64_t g_state = 20240817;
double next_u() {
    g_state = g_state * 6364136223846793005ull + 1442695040888963407ull;
    return double(g_state >> 11) * 0x1.0p-53;
}

std::vector<GlobalPoint> random_points(int count, double span, bool marks = false) {
    std::vector<GlobalPoint> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back(GlobalPoint{{(next_u() - 0.5) * span, 0.0, 0.0},
                                  marks ? 0.5 + next_u() * 2.0 : 0.0});
    return pts;
}

// brute-force pair count oracle
double pair_count_within(const std::vector<GlobalPoint> &pts, double r, int dim) {
    double n = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (sq_dist(pts[i].pos, pts[j].pos, dim) <= r * r) n += 1.0;
    return n;
}

}  // namespace

TEST_CASE("additive set function basics") {
    const JumpModel m = lattice_bd(1.0, 1, 1);
    const Window A = Window::box(1, 4);
    const Configuration zero(neighborhood(A, m.tmpl), m.default_state);
    SUBCASE("H == 1 counts the window") {
        CHECK(eval_additive(one_functional(), A, zero, m.tmpl) == doctest::Approx(9.0));
    }
    SUBCASE("zero events from the empty start give zero height sum") {
        CHECK(eval_additive(height_moment(1), A, zero, m.tmpl) == doctest::Approx(0.0));
    }
    SUBCASE("unmaterialized patches raise") {
        const Window big = Window::box(1, 9);
        CHECK_THROWS_AS(eval_additive(one_functional(), big, zero, m.tmpl), RegionError);
    }
}

TEST_CASE("additivity over disjoint windows on a random configuration") {
    const JumpModel m = lattice_bd(1.0, 1, 1);
    const Window all = Window::box(1, 10);
    const Trajectory traj =
        simulate_window(m, all, InitialDistribution::empty_for(m), 2.0, 5);
    SiteSet left, right;
    for (int c = -10; c <= -1; ++c) left.push_back(make_site({c}));
    for (int c = 0; c <= 10; ++c) right.push_back(make_site({c}));
    const LocalFunctional H = height_moment(2);
    const double split = eval_additive(H, Window(left), traj.final_state, m.tmpl) +
                         eval_additive(H, Window(right), traj.final_state, m.tmpl);
    CHECK(split ==
          doctest::Approx(eval_additive(H, all, traj.final_state, m.tmpl)).epsilon(1e-12));
}

TEST_CASE("phi1 counts points in the region") {
    const PointFunctional f = phi1();
    const std::vector<GlobalPoint> pts{{{0.2, 0, 0}, 0.0}, {{1.4, 0, 0}, 0.0},
                                       {{2.9, 0, 0}, 0.0}};
    const SiteSet region = Window::box(1, 4).sites();
    CHECK(eval_point_functional_global(f, region, pts, 1) == doctest::Approx(3.0));
    // restrict the region: the outside point stops counting
    CHECK(eval_point_functional_global(f, SiteSet{make_site({0}), make_site({1})}, pts, 1) ==
          doctest::Approx(2.0));
}

TEST_CASE("phi2 pair weights") {
    const PointFunctional f = phi2(1.0, 1.0);
    const std::vector<GlobalPoint> pair{{{0.6, 0, 0}, 0.0}, {{1.5, 0, 0}, 0.0}};  // 0.9 apart
    SUBCASE("both endpoints inside count a full pair") {
        CHECK(eval_point_functional_global(f, Window::box(1, 3).sites(), pair, 1) ==
              doctest::Approx(1.0));
    }
    SUBCASE("one endpoint outside contributes half") {
        CHECK(eval_point_functional_global(f, SiteSet{make_site({0})}, pair, 1) ==
              doctest::Approx(0.5));
    }
    SUBCASE("fully interior sets recover the exact pair count") {
        // brute-force pair count oracle on <= 100 points
        const auto pts = random_points(100, 10.0);
        const double via_phi =
            eval_point_functional_global(f, Window::box(1, 8).sites(), pts, 1);
        CHECK(via_phi == doctest::Approx(pair_count_within(pts, 1.0, 1)).epsilon(1e-12));
    }
}

TEST_CASE("phi3 counts low balls; the stack has one substrate toucher") {
    const PointFunctional f = phi3(0.5, 0.0);
    const std::vector<GlobalPoint> stack{{{0.5, 0, 0}, 0.5}, {{0.5, 0, 0}, 1.5}};
    CHECK(eval_point_functional_global(f, Window::box(1, 2).sites(), stack, 1) ==
          doctest::Approx(1.0));
}

TEST_CASE("phi4 counts the stack contact once in total") {
    const PointFunctional f = phi4(1.0, 1);
    const std::vector<GlobalPoint> stack{{{0.5, 0, 0}, 0.5}, {{0.5, 0, 0}, 1.5}};
    CHECK(eval_point_functional_global(f, Window::box(1, 2).sites(), stack, 1) ==
          doctest::Approx(1.0));
    // integer-valued within tolerance on a simulated pile
    const JumpModel m = multilayer_bd_stick({2.0, 1, 1.0});
    const Window A = Window::box(1, 6);
    const Trajectory traj = simulate_window(m, A, InitialDistribution::empty_for(m), 3.0, 9);
    const SiteSet halo = neighborhood(A, m.tmpl);
    const double total =
        eval_point_functional_global(f, halo, unembed(traj.final_state, 1), 1);
    CHECK(std::abs(total - std::round(total)) < 1e-6);
}

TEST_CASE("phi5 exposure") {
    SUBCASE("a lone ball is exposed") {
        CHECK(exposed_1d(0.5, {}));
        const PointFunctional f = phi5(2.0, 1);
        const std::vector<GlobalPoint> lone{{{0.5, 0, 0}, 0.5}};
        CHECK(eval_point_functional_global(f, Window::box(1, 2).sites(), lone, 1) ==
              doctest::Approx(0.5));
    }
    SUBCASE("a buried ball is not exposed") {
        // directly above at the contact distance: covers the whole shadow
        CHECK(!exposed_1d(0.5, {RelPoint{{0.0, 0, 0}, 1.5}}));
        // strictly below the covering envelope everywhere: three upper balls
        CHECK(!exposed_1d(0.5, {RelPoint{{-0.6, 0, 0}, 1.45}, RelPoint{{0.0, 0, 0}, 1.5},
                                RelPoint{{0.6, 0, 0}, 1.45}}));
    }
    SUBCASE("a side gap re-exposes the lower ball") {
        CHECK(exposed_1d(0.5, {RelPoint{{0.9, 0, 0}, 1.1}}));
    }
    SUBCASE("unsupported above one dimension") {
        CHECK_THROWS_AS(phi5(2.0, 2), ConfigError);
    }
}

TEST_CASE("embedding identity on empty, rsa, and stick outputs") {
    SUBCASE("empty set gives zero on both sides") {
        const auto N = NeighborhoodTemplate::cube_reach(1, 1.0);
        const auto check = embedding_identity_check(phi1(), Window::box(1, 3), {}, N, 1);
        CHECK(check.equal);
        CHECK(check.continuum_value == 0.0);
        CHECK(check.lattice_value == 0.0);
    }
    SUBCASE("rsa output with phi1") {
        const JumpModel m = rsa({3.0, 0.0, 1, 1.0});
        const Window A = Window::box(1, 6);
        const Trajectory traj = simulate_window(m, A, InitialDistribution::empty_for(m), 4.0, 2);
        const auto X = unembed(traj.final_state, 1);
        const auto check = embedding_identity_check(phi1(), A, X, m.tmpl, 1);
        CHECK(check.equal);
        CHECK(check.continuum_value > 0.0);
    }
    SUBCASE("stick pile with phi2") {
        const JumpModel m = multilayer_bd_stick({3.0, 1, 1.0});
        const Window A = Window::box(1, 5);
        const Trajectory traj = simulate_window(m, A, InitialDistribution::empty_for(m), 3.0, 6);
        const auto X = unembed(traj.final_state, 1);
        const auto check = embedding_identity_check(phi2(1.0, 1.0), A, X, m.tmpl, 1);
        CHECK(check.equal);
    }
}

TEST_CASE("translation covariance of the point sum") {
    const auto N = NeighborhoodTemplate::cube_reach(1, 1.0);
    const auto pts = random_points(40, 8.0, true);
    const PointFunctional f = phi2(1.0, 1.0);
    const Window A = Window::box(1, 3);
    const double base = eval_point_functional_global(f, A.sites(), pts, 1);
    const int shift = 3;
    std::vector<GlobalPoint> moved = pts;
    for (auto &p : moved) p.pos[0] += double(shift);
    SiteSet shifted_sites;
    for (const Site &v : A.sites()) shifted_sites.push_back(add(v, make_site({shift})));
    CHECK(eval_point_functional_global(f, shifted_sites, moved, 1) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("registry-built functionals validate their reach against the model") {
    // phi5 gathers neighbors out to distance 2 and needs a matching template
    const JumpModel narrow = multilayer_bd_stick({1.0, 1, 1.0});
    const JumpModel wide = multilayer_bd_stick({1.0, 1, 2.0});
    CHECK_THROWS_AS(build_functional("phi5", {}, narrow), ConfigError);
    const LocalFunctional f = build_functional("phi5", {}, wide);
    const Window A = Window::box(1, 3);
    const Trajectory traj =
        simulate_window(wide, A, InitialDistribution::empty_for(wide), 2.0, 3);
    CHECK(eval_additive(f, A, traj.final_state, wide.tmpl) >= 0.0);
    // phi2 with r1 beyond the template reach is rejected as well
    CHECK_THROWS_AS(build_functional("phi2", {{"r1", 3.0}}, narrow), ConfigError);
}

TEST_CASE("the cube-summed functional matches the per-point sum on patches") {
    const JumpModel m = rsa({2.0, 0.0, 1, 1.0});
    const Window A = Window::box(1, 4);
    const Trajectory traj = simulate_window(m, A, InitialDistribution::empty_for(m), 5.0, 13);
    const LocalFunctional H = to_local_functional(phi1(), 1);
    const double via_H = eval_additive(H, A, traj.final_state, m.tmpl);
    const double direct =
        eval_point_functional(phi1(), A, traj.final_state, m.tmpl);
    CHECK(via_H == doctest::Approx(direct).epsilon(1e-12));
}
