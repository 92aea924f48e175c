#include "ips/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ips {

double eval_additive(const LocalFunctional &H, const Window &A, const Configuration &config,
                     const NeighborhoodTemplate &N) {
    double sum = 0.0;
    for (const Site &v : A.sites()) sum += H.eval(config.patch(v, N));
    return sum;
}

namespace {

/// Neighbors of the pi-th point of the center cube, recentered on it and
/// restricted to the horizontal R-ball.
std::vector<RelPoint> neighbors_of(const std::vector<PatchPoint> &all, int center_index,
                                   std::size_t pi, double radius, int dim) {
    std::vector<RelPoint> out;
    const PatchPoint &self = all[pi];
    const double r2 = radius * radius;
    for (std::size_t j = 0; j < all.size(); ++j) {
        if (j == pi) continue;
        const PatchPoint &other = all[j];
        if (sq_dist(self.pos, other.pos, dim) > r2) continue;
        RelPoint rp;
        for (int a = 0; a < dim; ++a) rp.offset[std::size_t(a)] = other.pos[std::size_t(a)] - self.pos[std::size_t(a)];
        rp.mark = other.mark;
        out.push_back(rp);
    }
    (void)center_index;
    return out;
}

}  // namespace

double eval_point_functional(const PointFunctional &phi, const Window &A,
                             const Configuration &config, const NeighborhoodTemplate &N) {
    double sum = 0.0;
    for (const Site &v : A.sites()) {
        const Patch patch = config.patch(v, N);
        const auto all = patch_points(patch);
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (all[j].offset_index != N.center_index()) continue;
            sum += phi.eval(all[j].mark,
                            neighbors_of(all, N.center_index(), j, phi.radius, N.dim()));
        }
    }
    return sum;
}

double eval_point_functional_global(const PointFunctional &phi, const SiteSet &region,
                                    const std::vector<GlobalPoint> &X, int dim) {
    double sum = 0.0;
    const double r2 = phi.radius * phi.radius;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (!contains(region, cube_of(X[i].pos, dim))) continue;
        std::vector<RelPoint> others;
        for (std::size_t j = 0; j < X.size(); ++j) {
            if (j == i) continue;
            if (sq_dist(X[i].pos, X[j].pos, dim) > r2) continue;
            RelPoint rp;
            for (int a = 0; a < dim; ++a)
                rp.offset[std::size_t(a)] = X[j].pos[std::size_t(a)] - X[i].pos[std::size_t(a)];
            rp.mark = X[j].mark;
            others.push_back(rp);
        }
        sum += phi.eval(X[i].mark, others);
    }
    return sum;
}

LocalFunctional to_local_functional(const PointFunctional &phi, int dim) {
    LocalFunctional H;
    H.name = phi.name;
    const PointFunctional f = phi;
    H.eval = [f, dim](const Patch &patch) {
        double sum = 0.0;
        const int center = patch.tmpl->center_index();
        const auto all = patch_points(patch);
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (all[j].offset_index != center) continue;
            sum += f.eval(all[j].mark, neighbors_of(all, center, j, f.radius, dim));
        }
        return sum;
    };
    return H;
}

EmbeddingCheck embedding_identity_check(const PointFunctional &phi, const Window &A,
                                        const std::vector<GlobalPoint> &X,
                                        const NeighborhoodTemplate &N, int dim) {
    EmbeddingCheck check;
    check.continuum_value = eval_point_functional_global(phi, A.sites(), X, dim);
    // points beyond the halo are out of reach of every point of A's cubes
    // and contribute to neither side
    const SiteSet halo = neighborhood(A, N);
    std::vector<GlobalPoint> within;
    for (const GlobalPoint &p : X)
        if (contains(halo, cube_of(p.pos, dim))) within.push_back(p);
    const Configuration config = embed(within, halo, dim);
    check.lattice_value = eval_point_functional(phi, A, config, N);
    const double scale = std::max({1.0, std::abs(check.continuum_value),
                                   std::abs(check.lattice_value)});
    check.equal = std::abs(check.continuum_value - check.lattice_value) <= 1e-12 * scale;
    return check;
}

PointFunctional phi1() {
    PointFunctional f;
    f.name = "phi1";
    f.radius = 0.0;  // needs no neighbors
    f.eval = [](double, const std::vector<RelPoint> &) { return 1.0; };
    return f;
}

PointFunctional phi2(double r1, double radius) {
    if (r1 < 0.0 || r1 > radius) throw ConfigError("phi2: requires 0 <= r1 <= R");
    PointFunctional f;
    f.name = "phi2";
    f.radius = radius;
    const double r2 = r1 * r1;
    f.eval = [r2](double, const std::vector<RelPoint> &others) {
        std::size_t n = 0;
        const std::array<double, kMaxDim> origin{0.0, 0.0, 0.0};
        for (const RelPoint &p : others)
            if (sq_dist(origin, p.offset, kMaxDim) <= r2) ++n;
        return 0.5 * double(n);
    };
    return f;
}

PointFunctional phi3(double r3, double radius) {
    if (!(r3 > 0.0)) throw ConfigError("phi3: r3 must be > 0");
    PointFunctional f;
    f.name = "phi3";
    f.radius = radius;
    f.eval = [r3](double mark, const std::vector<RelPoint> &) {
        return mark <= r3 ? 1.0 : 0.0;
    };
    return f;
}

PointFunctional phi4(double radius, int dim) {
    PointFunctional f;
    f.name = "phi4";
    f.radius = radius;
    f.eval = [dim](double mark, const std::vector<RelPoint> &others) {
        std::size_t contacts = 0;
        for (const RelPoint &p : others) {
            double d2 = 0.0;
            for (int a = 0; a < dim; ++a) d2 += p.offset[std::size_t(a)] * p.offset[std::size_t(a)];
            const double dm = p.mark - mark;
            const double dist = std::sqrt(d2 + dm * dm);
            if (std::abs(dist - 1.0) <= kContactTol) ++contacts;
        }
        return 0.5 * double(contacts);
    };
    return f;
}

bool exposed_1d(double mark, const std::vector<RelPoint> &others) {
    // Contact height of a ball dropped at u with the ball at (0, mark), and
    // with each neighbor; the drop settles at the highest contact. Exposed
    // means this ball wins somewhere.
    auto contact = [](double u, double x, double m) {
        const double d = u - x;
        if (std::abs(d) >= 1.0) return -std::numeric_limits<double>::infinity();
        return m + std::sqrt(1.0 - d * d);
    };
    auto margin = [&](double u) {
        const double self = contact(u, 0.0, mark);
        double best = 0.5;  // substrate
        for (const RelPoint &p : others) best = std::max(best, contact(u, p.offset[0], p.mark));
        return self - best;
    };
    // scan the support, then refine around the best cell
    const int kGrid = 2048;
    double best_u = 0.0, best_m = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < kGrid; ++i) {
        const double u = -1.0 + 2.0 * double(i) / double(kGrid);
        const double m = margin(u);
        if (m > best_m) {
            best_m = m;
            best_u = u;
        }
    }
    double lo = best_u - 2.0 / double(kGrid), hi = best_u + 2.0 / double(kGrid);
    for (int it = 0; it < 60; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (margin(a) < margin(b))
            lo = a;
        else
            hi = b;
    }
    best_m = std::max(best_m, margin(0.5 * (lo + hi)));
    return best_m > kContactTol;
}

PointFunctional phi5(double radius, int dim) {
    if (dim != 1) throw ConfigError("phi5: exposure geometry is only supported for d = 1");
    if (radius < 2.0) throw ConfigError("phi5: requires interaction range >= 2");
    PointFunctional f;
    f.name = "phi5";
    f.radius = radius;
    f.eval = [](double mark, const std::vector<RelPoint> &others) {
        return exposed_1d(mark, others) ? mark : 0.0;
    };
    return f;
}

LocalFunctional height_moment(int k) {
    if (k < 0) throw ConfigError("height_moment: k must be >= 0");
    LocalFunctional H;
    H.name = k == 1 ? "height" : "height_moment_" + std::to_string(k);
    H.eval = [k](const Patch &patch) {
        return std::pow(double(height_of(patch.center())), double(k));
    };
    return H;
}

LocalFunctional one_functional() {
    LocalFunctional H;
    H.name = "one";
    H.eval = [](const Patch &) { return 1.0; };
    return H;
}

}  // namespace ips
