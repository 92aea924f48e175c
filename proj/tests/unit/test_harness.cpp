#include <doctest.h>

#include <cmath>

#include "ips/harness.hpp"

using namespace ips;

namespace {

ExperimentPlan lattice_plan(std::vector<int> radii, double tau, std::vector<double> times,
                            std::size_t replicates, std::uint64_t seed, int range = 1) {
    JumpModel m = lattice_bd(1.0, 1, range);
    InitialDistribution init = InitialDistribution::empty_for(m);
    return ExperimentPlan::make(m, height_moment(1), std::move(radii), tau, std::move(times),
                                replicates, seed, init, 2);
}

}  // namespace

TEST_CASE("statistics utilities") {
    SUBCASE("moments of a known sample") {
        const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8};
        const auto m = stats::moments(xs);
        CHECK(m.mean == doctest::Approx(4.5));
        CHECK(m.variance == doctest::Approx(6.0));
        CHECK(m.skewness == doctest::Approx(0.0));
    }
    SUBCASE("line fit recovers a noiseless slope") {
        const std::vector<double> xs{0, 1, 2, 3}, ys{1.0, 3.0, 5.0, 7.0};
        const auto fit = stats::fit_line(xs, ys);
        REQUIRE(fit.ok);
        CHECK(fit.slope == doctest::Approx(2.0));
        CHECK(fit.intercept == doctest::Approx(1.0));
    }
    SUBCASE("pairwise sum matches plain addition") {
        std::vector<double> xs(1000);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = double(i) * 0.25;
        CHECK(stats::pairwise_sum(xs) == doctest::Approx(0.25 * 999.0 * 1000.0 / 2.0));
    }
    SUBCASE("ks statistic is small for a normal sample") {
        std::vector<double> xs;
        std::uint64_t state = 5;
        auto next_u = [&state] {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return (double(state >> 11) + 0.5) * 0x1.0p-53;
        };
        for (int i = 0; i < 4000; ++i) {
            const double u1 = next_u(), u2 = next_u();
            xs.push_back(std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2));
        }
        CHECK(stats::ks_normal_statistic(xs) < 1.63 / std::sqrt(4000.0));
    }
}

TEST_CASE("lln: H == 1 is exactly one on every window") {
    JumpModel m = lattice_bd(1.0, 1, 1);
    const ExperimentPlan plan =
        ExperimentPlan::make(m, one_functional(), {2, 4, 8}, 1.0, {1.0}, 20, 7,
                             InitialDistribution::empty_for(m), 2);
    const LlnReport report = run_lln(plan);
    REQUIRE(report.rows.size() == 3);
    for (const auto &row : report.rows) {
        CHECK(row.mean == doctest::Approx(1.0));
        CHECK(row.se == doctest::Approx(0.0));
    }
    CHECK(report.stabilized);
    CHECK(report.window_check.all_interior_consistent);
}

TEST_CASE("clt on a single active site recovers the Poisson variance") {
    // window {0}: the height is a Poisson(tau) count
    const double tau = 1.5;
    const ExperimentPlan plan = lattice_plan({0}, tau, {tau}, 8000, 11);
    const CltReport report = run_clt(plan);
    REQUIRE(report.rows.size() == 1);
    const auto &row = report.rows[0];
    CHECK(row.window_size == 1);
    CHECK(std::abs(row.cov_scaled - tau) <= 3.0 * row.cov_se);
    CHECK(!report.degenerate_variance);
    // Poisson(1.5) skewness is 1/sqrt(1.5)
    CHECK(row.skew == doctest::Approx(1.0 / std::sqrt(tau)).epsilon(0.15));
}

TEST_CASE("clt flags degenerate variance when nothing moves") {
    JumpModel m = lattice_bd(1.0, 1, 1);
    m.rate = [](const Patch &) { return 0.0; };
    const ExperimentPlan plan = ExperimentPlan::make(
        m, height_moment(1), {2}, 1.0, {1.0}, 200, 3, InitialDistribution::empty_for(m), 2);
    const CltReport report = run_clt(plan);
    CHECK(report.degenerate_variance);
    CHECK(report.rows[0].cov_scaled == doctest::Approx(0.0));
}

TEST_CASE("sigma estimates agree with the single-site oracle on independent sites") {
    // independent sites (range 0): Y_{v,t} is a Poisson(t) count, so
    // sigma(s,t) = Cov(N_s, N_t) = min(s,t)
    const double s = 0.5, t = 1.0;
    const ExperimentPlan plan = lattice_plan({24}, 1.0, {s, t}, 3000, 13, /*range=*/0);
    const SigmaReport report = estimate_sigma(plan, s, t, 3);
    const double oracle = std::min(s, t);
    CHECK(std::abs(report.sigma_scaling - oracle) <= 3.5 * report.se_a);
    CHECK(std::abs(report.sigma_sum - oracle) <= 3.5 * report.se_b);
    CHECK(report.agree);
    CHECK(!report.truncation_warning);  // off-origin terms are pure noise
}

TEST_CASE("sigma diagonal is a variance and non-negative within noise") {
    const double t = 1.0;
    const ExperimentPlan plan = lattice_plan({16}, 1.0, {t, t}, 1500, 17);
    const SigmaReport report = estimate_sigma(plan, t, t, 4);
    CHECK(report.sigma_scaling > -3.0 * report.se_a);
    CHECK(report.sigma_sum > -3.0 * report.se_b);
}

TEST_CASE("covariance decay on independent sites is a point mass at zero") {
    const double s = 1.0, t = 1.0;
    const ExperimentPlan plan = lattice_plan({20}, 1.0, {s, t}, 2500, 23, /*range=*/0);
    const DecayReport report = covariance_decay(plan, s, t, {0, 1, 2, 3});
    REQUIRE(report.rows.size() == 4);
    // distance zero equals the Poisson variance
    CHECK(std::abs(report.rows[0].cov - t) <= 3.5 * report.rows[0].se);
    CHECK(report.rows[0].significant);
    // off-zero entries are statistically zero
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        CHECK(std::abs(report.rows[i].cov) <= 4.0 * report.rows[i].se);
}

TEST_CASE("covariance decay for interacting deposition falls off and fits") {
    const double t = 1.0;
    const ExperimentPlan plan = lattice_plan({24}, 1.0, {t, t}, 4000, 29);
    const DecayReport report = covariance_decay(plan, t, t, {0, 1, 2, 3, 4, 5});
    CHECK(report.fit_ok);
    CHECK(report.decreasing);
    CHECK(report.below_envelope);
    CHECK(report.rows[0].significant);
    CHECK(report.rows[0].abs_cov > report.rows[2].abs_cov);
}

TEST_CASE("cluster tail probe stays within the 2^-n bound") {
    const JumpModel m = lattice_bd(1.0, 1, 1);
    const double delta = cluster_delta(m);
    CHECK(delta > 0.0);
    const ClusterReport report = cluster_tail_probe(m, delta, {1, 2}, 3000, 31, 2);
    CHECK(report.all_within_bound);
    for (const auto &row : report.rows) {
        CHECK(row.empirical_p <= row.bound + 3.0 * row.se);
        CHECK(row.replicates == 3000);
    }
}

TEST_CASE("cluster tail log-probabilities fall at least linearly in n") {
    const JumpModel m = lattice_bd(1.0, 1, 1);
    const ClusterReport report =
        cluster_tail_probe(m, cluster_delta(m), {1, 2, 3}, 8000, 67, 2);
    std::vector<double> ns, logs;
    for (const auto &row : report.rows) {
        REQUIRE(row.empirical_p > 0.0);
        ns.push_back(double(row.n));
        logs.push_back(std::log(row.empirical_p));
    }
    const auto fit = stats::fit_line(ns, logs);
    REQUIRE(fit.ok);
    CHECK(fit.slope <= -std::log(2.0));
}

TEST_CASE("coupling check records zero violations") {
    const JumpModel m = lattice_bd(1.0, 1, 1);
    const Window A = Window::box(1, 6);
    const Window B = Window::box(1, 12);
    const CoupleReport report = coupling_check(m, A, B, InitialDistribution::empty_for(m), 1.0,
                                               SiteSet{make_site({0})}, 150, 37, 2);
    CHECK(report.violations == 0);
    CHECK(report.hypothesis_met > 0);
    CHECK(report.rows.size() == 150);
    // identical windows agree trivially, hypothesis always met
    const CoupleReport same = coupling_check(m, A, A, InitialDistribution::empty_for(m), 1.0,
                                             SiteSet{make_site({0})}, 20, 37, 2);
    CHECK(same.violations == 0);
    for (const auto &row : same.rows) CHECK(row.agreement);
}

TEST_CASE("oracle comparison against the exact transient law") {
    SUBCASE("two-state flip at t = 0.5") {
        JumpModel m = spin_flip(1.0);
        const ExperimentPlan plan =
            ExperimentPlan::make(m, height_moment(1), {0}, 0.5, {0.5}, 20000, 41,
                                 InitialDistribution::empty_for(m), 2);
        const OracleReport report = oracle_compare(plan, 1);
        CHECK(report.exact == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-10));
        CHECK(report.pass);
        CHECK(report.sink_mass == doctest::Approx(0.0));
    }
    SUBCASE("tau = 0 reproduces the initial state exactly") {
        JumpModel m = spin_flip(1.0);
        const ExperimentPlan plan =
            ExperimentPlan::make(m, height_moment(1), {0}, 0.0, {}, 50, 43,
                                 InitialDistribution::empty_for(m), 1);
        const OracleReport report = oracle_compare(plan, 1);
        CHECK(report.simulated == 0.0);
        CHECK(report.exact == doctest::Approx(0.0));
        CHECK(report.z == 0.0);
    }
    SUBCASE("two-site capped deposition against the matrix exponential") {
        JumpModel m = lattice_bd(1.0, 1, 1);
        ExperimentPlan plan =
            ExperimentPlan::make(m, height_moment(1), {0}, 0.3, {0.3}, 20000, 47,
                                 InitialDistribution::empty_for(m), 2);
        // two-site window: radius-0 box is one site; use an explicit pair
        plan.windows.back() = Window(SiteSet{make_site({0}), make_site({1})});
        const OracleReport report = oracle_compare(plan, 10);
        CHECK(report.pass);
        CHECK(report.sink_mass < 1e-8);
    }
}

TEST_CASE("increment fourth moments match the Poisson oracle on independent sites") {
    // S_t - S_0 over independent sites is a sum of |A| iid Poisson(g) counts;
    // the normalized fourth moment is 3 g^2 + g / |A|
    const std::vector<double> grid{0.0, 0.25, 0.5, 1.0};
    const ExperimentPlan plan = lattice_plan({12}, 1.0, grid, 6000, 53, /*range=*/0);
    const IncrementReport report = increment_moment_probe(plan);
    REQUIRE(report.rows.size() == 3);
    const double sites = 25.0;
    for (const auto &row : report.rows) {
        const double oracle = 3.0 * row.gap * row.gap + row.gap / sites;
        CHECK(std::abs(row.fourth_moment - oracle) <= 4.0 * row.se);
    }
    CHECK(report.fit_ok);
    // dominated by the (t-s)^2 term at these gaps
    CHECK(report.fitted_exponent > 1.0);
}

TEST_CASE("zero-gap increments vanish identically") {
    const std::vector<double> grid{0.5, 0.5};
    const ExperimentPlan plan = lattice_plan({4}, 1.0, grid, 100, 59);
    const IncrementReport report = increment_moment_probe(plan);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].fourth_moment == 0.0);
}

TEST_CASE("reports are deterministic and independent of the worker count") {
    JumpModel m = lattice_bd(1.0, 1, 1);
    auto make_plan = [&](int workers) {
        return ExperimentPlan::make(m, height_moment(1), {4, 8}, 1.0, {0.5, 1.0}, 300, 61,
                                    InitialDistribution::empty_for(m), workers);
    };
    const LlnReport a = run_lln(make_plan(1));
    const LlnReport b = run_lln(make_plan(4));
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mean == b.rows[i].mean);  // bitwise equality
        CHECK(a.rows[i].se == b.rows[i].se);
    }
    const CltReport ca = run_clt(make_plan(1));
    const CltReport cb = run_clt(make_plan(3));
    REQUIRE(ca.rows.size() == cb.rows.size());
    for (std::size_t i = 0; i < ca.rows.size(); ++i)
        CHECK(ca.rows[i].cov_scaled == cb.rows[i].cov_scaled);
}
