#include <doctest.h>

#include <cmath>

#include "ips/rng.hpp"

using namespace ips;

TEST_CASE("identical (seed, site) yields identical event sequences") {
    const Site v = make_site({3, -7});
    EventStream a(123456789ull, v, 1.5);
    EventStream b(123456789ull, v, 1.5);
    for (std::uint32_t i = 1; i <= 50; ++i) {
        const auto [ta, ua] = a.arrival(i);
        const auto [tb, ub] = b.arrival(i);
        CHECK(ta == tb);
        CHECK(ua == ub);
    }
    // derivation is independent of what else is materialized
    EventStream other(123456789ull, make_site({4, -7}), 1.5);
    (void)other.arrivals_until(10.0);
    CHECK(a.arrival(7) == b.arrival(7));
}

TEST_CASE("arrival times are strictly increasing and labels lie in [0,1)") {
    EventStream s(7ull, make_site({0}), 2.0);
    auto cur = s.cursor();
    double prev = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const auto [t, u] = cur.next();
        CHECK(t > prev);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        prev = t;
    }
}

TEST_CASE("empirical mean inter-arrival is 1/rate") {
    const double rate = 2.0;
    const std::size_t n = 100000;
    EventStream s(99ull, make_site({5}), rate);
    auto cur = s.cursor();
    double prev = 0.0, sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [t, u] = cur.next();
        const double gap = t - prev;
        sum += gap;
        sum2 += gap * gap;
        prev = t;
    }
    const double mean = sum / double(n);
    const double sd = std::sqrt(sum2 / double(n) - mean * mean);
    const double se = sd / std::sqrt(double(n));
    CHECK(std::abs(mean - 1.0 / rate) <= 3.0 * se);
}

TEST_CASE("event counts at distinct sites are uncorrelated across seeds") {
    // independence check via the sample correlation oracle
    const std::size_t n = 10000;
    std::vector<double> xs(n), ys(n);
    for (std::size_t seed = 0; seed < n; ++seed) {
        EventStream a(seed, make_site({0}), 3.0);
        EventStream b(seed, make_site({1}), 3.0);
        xs[seed] = double(a.arrivals_until(1.0).size());
        ys[seed] = double(b.arrivals_until(1.0).size());
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(double(n)));
}

TEST_CASE("stream construction rejects non-positive rates") {
    CHECK_THROWS_AS(EventStream(1ull, make_site({0}), 0.0), ConfigError);
    CHECK_THROWS_AS(EventStream(1ull, make_site({0}), -1.0), ConfigError);
}

TEST_CASE("label stream returns the label first, then derived uniforms") {
    LabelStream ls(0.375);
    CHECK(ls.next() == 0.375);
    for (int i = 0; i < 100; ++i) {
        const double u = ls.next();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    // deterministic given the label
    LabelStream a(0.2), b(0.2);
    a.next();
    b.next();
    CHECK(a.next() == b.next());
}

TEST_CASE("init uniforms are scoped away from event labels") {
    const Site v = make_site({2});
    UniformSequence init(11ull, v, StreamKind::init);
    EventStream events(11ull, v, 1.0);
    const double u0 = init.next();
    const auto [t1, l1] = events.arrival(1);
    CHECK(u0 != l1);  // distinct counter lanes
    (void)t1;
}
