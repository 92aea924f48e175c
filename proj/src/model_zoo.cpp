#include "ips/model_zoo.hpp"

#include <algorithm>
#include <cmath>

namespace ips {

double min_sq_dist_to(const std::array<double, kMaxDim> &pos,
                      const std::vector<PatchPoint> &points, int dim) {
    double best = std::numeric_limits<double>::infinity();
    for (const PatchPoint &p : points) best = std::min(best, sq_dist(pos, p.pos, dim));
    return best;
}

bool rsa_accepts(const std::array<double, kMaxDim> &pos, const std::vector<PatchPoint> &points,
                 int dim) {
    return min_sq_dist_to(pos, points, dim) >= 1.0;
}

double stick_drop_mark(const std::array<double, kMaxDim> &x,
                       const std::vector<PatchPoint> &points, int dim) {
    double mark = 0.5;  // substrate contact for a ball of radius 1/2
    for (const PatchPoint &p : points) {
        const double rho2 = sq_dist(x, p.pos, dim);
        if (rho2 < 1.0) mark = std::max(mark, p.mark + std::sqrt(1.0 - rho2));
    }
    return mark;
}

std::optional<double> rolling_place_1d(double x, const std::vector<double> &centers,
                                       double tie) {
    // nearest center within unit horizontal distance is struck first
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> struck;
    for (double c : centers) {
        const double d = std::abs(c - x);
        if (d >= 1.0) continue;
        if (d < best) {
            best = d;
            struck.assign(1, c);
        } else if (d == best) {
            struck.push_back(c);
        }
    }
    if (struck.empty()) return x;  // direct substrate hit
    std::sort(struck.begin(), struck.end());
    // exact midpoint between two equidistant centers: uniform tie-break
    const double strike = (struck.size() == 1 || tie < 0.5) ? struck.front() : struck.back();
    // roll down the far side; a dead-center hit falls off either side
    double dir = x - strike;
    if (dir == 0.0) dir = (tie < 0.5) ? -1.0 : 1.0;
    const double target = strike + (dir > 0 ? 1.0 : -1.0);
    for (double c : centers) {
        if (c == strike) continue;
        if (std::abs(c - target) < 1.0 - kContactTol) return std::nullopt;
    }
    return target;
}

std::int64_t hard_core_cap(double side, double eps, int dim) {
    const double cells_per_axis = std::ceil(side * std::sqrt(double(dim)) / eps) + 1.0;
    double cap = 1.0;
    for (int i = 0; i < dim; ++i) cap *= cells_per_axis;
    return std::int64_t(cap);
}

// ---------------------------------------------------------------------------
// lattice models
// ---------------------------------------------------------------------------

JumpModel lattice_bd(double lambda, int dim, int range) {
    if (!(lambda > 0.0)) throw ConfigError("lattice_bd: lambda must be > 0");
    JumpModel m("lattice_bd", NeighborhoodTemplate::box(dim, range), lambda);
    m.default_state = LocalState(std::int64_t(0));
    m.rate = [lambda](const Patch &) { return lambda; };
    m.outcome = [](Patch &patch, LabelStream &) {
        std::int64_t top = 0;
        for (const LocalState &s : patch.states) top = std::max(top, height_of(s));
        patch.center() = LocalState(top + 1);
    };
    m.enum_kernel = [lambda](const Patch &patch) {
        std::int64_t top = 0;
        for (const LocalState &s : patch.states) top = std::max(top, height_of(s));
        Patch next = patch;
        next.center() = LocalState(top + 1);
        return std::vector<std::pair<Patch, double>>{{next, lambda}};
    };
    m.enum_states = [](std::int64_t cap) {
        std::vector<LocalState> out;
        for (std::int64_t h = 0; h <= cap; ++h) out.emplace_back(h);
        return out;
    };
    return m;
}

JumpModel lattice_bd_relaxed(double lambda, int dim, int range) {
    if (!(lambda > 0.0)) throw ConfigError("lattice_bd_relaxed: lambda must be > 0");
    JumpModel m("lattice_bd_relaxed", NeighborhoodTemplate::box(dim, range), lambda);
    m.default_state = LocalState(std::int64_t(0));
    m.rate = [lambda](const Patch &) { return lambda; };
    auto minima = [](const Patch &patch) {
        std::int64_t low = height_of(patch.states[0]);
        for (const LocalState &s : patch.states) low = std::min(low, height_of(s));
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < patch.states.size(); ++i)
            if (height_of(patch.states[i]) == low) idx.push_back(i);
        return idx;
    };
    m.outcome = [minima](Patch &patch, LabelStream &labels) {
        const auto idx = minima(patch);
        std::size_t pick = idx.size() == 1
                               ? idx[0]
                               : idx[std::min(idx.size() - 1,
                                              std::size_t(labels.next() * double(idx.size())))];
        patch.states[pick] = LocalState(height_of(patch.states[pick]) + 1);
    };
    m.enum_kernel = [lambda, minima](const Patch &patch) {
        const auto idx = minima(patch);
        std::vector<std::pair<Patch, double>> out;
        for (std::size_t i : idx) {
            Patch next = patch;
            next.states[i] = LocalState(height_of(patch.states[i]) + 1);
            out.emplace_back(std::move(next), lambda / double(idx.size()));
        }
        return out;
    };
    m.enum_states = [](std::int64_t cap) {
        std::vector<LocalState> out;
        for (std::int64_t h = 0; h <= cap; ++h) out.emplace_back(h);
        return out;
    };
    return m;
}

JumpModel spin_flip(double rate, int dim) {
    if (!(rate > 0.0)) throw ConfigError("spin_flip: rate must be > 0");
    JumpModel m("spin_flip", NeighborhoodTemplate::box(dim, 0), rate);
    m.default_state = LocalState(std::int64_t(0));
    m.rate = [rate](const Patch &) { return rate; };
    m.outcome = [](Patch &patch, LabelStream &) {
        patch.center() = LocalState(std::int64_t(1) - height_of(patch.center()));
    };
    m.enum_kernel = [rate](const Patch &patch) {
        Patch next = patch;
        next.center() = LocalState(std::int64_t(1) - height_of(patch.center()));
        return std::vector<std::pair<Patch, double>>{{next, rate}};
    };
    m.enum_states = [](std::int64_t) {
        return std::vector<LocalState>{LocalState(std::int64_t(0)), LocalState(std::int64_t(1))};
    };
    return m;
}

// ---------------------------------------------------------------------------
// continuum models
// ---------------------------------------------------------------------------

namespace {

std::array<double, kMaxDim> uniform_in_cube(LabelStream &labels, int dim) {
    std::array<double, kMaxDim> pos{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) pos[std::size_t(i)] = labels.next();
    return pos;
}

/// Appends a point at patch coordinates `pos` (relative to the center cube
/// corner) to whichever cube of the patch contains it.
void insert_patch_point(Patch &patch, const std::array<double, kMaxDim> &pos, double mark,
                        int dim) {
    Site cube{0, 0, 0};
    MarkedPoint mp;
    for (int i = 0; i < dim; ++i) {
        cube[std::size_t(i)] = std::int32_t(std::floor(pos[std::size_t(i)]));
        mp.pos[std::size_t(i)] = pos[std::size_t(i)] - std::floor(pos[std::size_t(i)]);
    }
    mp.mark = mark;
    const int idx = patch.tmpl->index_of(cube);
    if (idx < 0) throw RegionError("destination cube outside the interaction template");
    points_of(patch.states[std::size_t(idx)]).push_back(mp);
}

double patch_side(const NeighborhoodTemplate &tmpl) {
    int span = 0;
    for (const Site &o : tmpl.offsets())
        for (int i = 0; i < tmpl.dim(); ++i) span = std::max(span, std::abs(int(o[std::size_t(i)])));
    return double(2 * span + 1);
}

}  // namespace

JumpModel rsa(const RsaParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("rsa: lambda must be > 0");
    if (p.desorption < 0.0) throw ConfigError("rsa: desorption must be >= 0");
    if (p.range < 1.0) throw ConfigError("rsa: range must be >= 1");
    NeighborhoodTemplate tmpl = NeighborhoodTemplate::cube_reach(p.dim, p.range);
    const std::int64_t pack = hard_core_cap(patch_side(tmpl), 1.0, p.dim);
    const double lambda = p.lambda, death = p.desorption;
    JumpModel m("rsa", std::move(tmpl), lambda + death * double(pack));
    m.default_state = LocalState(PointSet{});
    const int dim = p.dim;
    m.rate = [lambda, death](const Patch &patch) {
        return lambda + death * double(points_of(patch.center()).size());
    };
    m.outcome = [lambda, death, dim](Patch &patch, LabelStream &labels) {
        const double total = lambda + death * double(points_of(patch.center()).size());
        if (labels.next() * total < lambda) {
            const auto pos = uniform_in_cube(labels, dim);
            if (rsa_accepts(pos, patch_points(patch), dim))
                points_of(patch.center()).push_back(MarkedPoint{pos, 0.0});
        } else {
            PointSet &pts = points_of(patch.center());
            const std::size_t idx =
                std::min(pts.size() - 1, std::size_t(labels.next() * double(pts.size())));
            pts.erase(pts.begin() + std::ptrdiff_t(idx));
        }
    };
    return m;
}

JumpModel multilayer_bd_stick(const StickParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("multilayer_bd_stick: lambda must be > 0");
    if (p.dim != 1 && p.dim != 2)
        throw ConfigError("multilayer_bd_stick: substrate dimension must be 1 or 2");
    if (p.range < 1.0) throw ConfigError("multilayer_bd_stick: range must be >= 1");
    JumpModel m("multilayer_bd_stick", NeighborhoodTemplate::cube_reach(p.dim, p.range),
                p.lambda);
    m.default_state = LocalState(PointSet{});
    const double lambda = p.lambda;
    const int dim = p.dim;
    m.rate = [lambda](const Patch &) { return lambda; };
    m.outcome = [dim](Patch &patch, LabelStream &labels) {
        const auto pos = uniform_in_cube(labels, dim);
        const double mark = stick_drop_mark(pos, patch_points(patch), dim);
        points_of(patch.center()).push_back(MarkedPoint{pos, mark});
    };
    return m;
}

JumpModel monolayer_bd_rolling_1d(const RollingParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("monolayer_bd_rolling_1d: lambda must be > 0");
    if (p.range < 2.0) throw ConfigError("monolayer_bd_rolling_1d: range must be >= 2");
    JumpModel m("monolayer_bd_rolling_1d", NeighborhoodTemplate::cube_reach(1, p.range),
                p.lambda);
    m.default_state = LocalState(PointSet{});
    const double lambda = p.lambda;
    m.rate = [lambda](const Patch &) { return lambda; };
    m.outcome = [](Patch &patch, LabelStream &labels) {
        const double x = labels.next();
        const double tie = labels.next();
        std::vector<double> centers;
        for (const PatchPoint &pp : patch_points(patch)) centers.push_back(pp.pos[0]);
        const auto placed = rolling_place_1d(x, centers, tie);
        if (placed) insert_patch_point(patch, {*placed, 0.0, 0.0}, 0.0, 1);
    };
    return m;
}

JumpModel continuum_exclusion(const ExclusionParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("exclusion: lambda must be > 0");
    if (!(p.eps > 0.0)) throw ConfigError("exclusion: eps must be > 0");
    if (!(p.jump_radius > 0.0)) throw ConfigError("exclusion: jump_radius must be > 0");
    const double reach = p.jump_radius + p.eps;
    NeighborhoodTemplate tmpl = NeighborhoodTemplate::cube_reach(p.dim, reach);
    const std::int64_t pack = hard_core_cap(patch_side(tmpl), p.eps, p.dim);
    const double lambda = p.lambda;
    JumpModel m("exclusion", std::move(tmpl), lambda * double(pack));
    m.default_state = LocalState(PointSet{});
    const int dim = p.dim;
    const double eps2 = p.eps * p.eps, jr = p.jump_radius;
    m.rate = [lambda](const Patch &patch) {
        return lambda * double(points_of(patch.center()).size());
    };
    m.outcome = [dim, eps2, jr](Patch &patch, LabelStream &labels) {
        PointSet &pts = points_of(patch.center());
        const std::size_t idx =
            std::min(pts.size() - 1, std::size_t(labels.next() * double(pts.size())));
        std::array<double, kMaxDim> dest = pts[idx].pos;
        if (dim == 1) {
            dest[0] += (2.0 * labels.next() - 1.0) * jr;
        } else {
            const double r = jr * std::sqrt(labels.next());
            const double ang = 2.0 * M_PI * labels.next();
            dest[0] += r * std::cos(ang);
            dest[1] += r * std::sin(ang);
        }
        const auto all = patch_points(patch);
        for (const PatchPoint &pp : all) {
            if (pp.offset_index == patch.tmpl->center_index() && pp.point_index == int(idx))
                continue;
            if (sq_dist(dest, pp.pos, dim) < eps2) return;  // blocked
        }
        const double mark = pts[idx].mark;
        pts.erase(pts.begin() + std::ptrdiff_t(idx));
        insert_patch_point(patch, dest, mark, dim);
    };
    return m;
}

JumpModel zero_range(const ZeroRangeParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("zero_range: lambda must be > 0");
    if (!(p.eps > 0.0)) throw ConfigError("zero_range: eps must be > 0");
    if (!(p.jump_radius > 0.0)) throw ConfigError("zero_range: jump_radius must be > 0");
    const double reach = std::max(p.eps, p.jump_radius);
    NeighborhoodTemplate tmpl = NeighborhoodTemplate::cube_reach(p.dim, reach);
    // A partition of the cube into diameter-eps cells certifies the bound
    // K_cells * max(lambda_0, 2 sup_n n lambda_n). The default family
    // lambda/(n+1) has lambda_0 = sup_n n lambda_n = lambda.
    std::function<double(int)> family = p.rate_fn;
    double sup_rate = p.sup_n_rate;
    const double lambda = p.lambda;
    if (!family) {
        family = [lambda](int n) { return lambda / double(n + 1); };
        sup_rate = lambda;
    } else if (!(sup_rate >= 0.0)) {
        throw ConfigError("zero_range: custom family needs sup_n_rate >= 0");
    }
    const std::int64_t cells = hard_core_cap(1.0, p.eps, p.dim);
    const double cell_bound = std::max(family(0), 2.0 * sup_rate);
    if (!(cell_bound > 0.0)) throw ConfigError("zero_range: rate family is identically zero");
    JumpModel m("zero_range", std::move(tmpl), cell_bound * double(cells));
    m.default_state = LocalState(PointSet{});
    const int dim = p.dim;
    const double eps2 = p.eps * p.eps, jr = p.jump_radius;
    auto per_particle = [family, eps2, dim](const Patch &patch) {
        const auto all = patch_points(patch);
        const int center = patch.tmpl->center_index();
        std::vector<double> rates;
        for (const PatchPoint &pp : all) {
            if (pp.offset_index != center) continue;
            int n = 0;
            for (const PatchPoint &other : all) {
                if (other.offset_index == pp.offset_index && other.point_index == pp.point_index)
                    continue;
                if (sq_dist(pp.pos, other.pos, dim) <= eps2) ++n;
            }
            rates.push_back(family(n));
        }
        return rates;
    };
    m.rate = [per_particle](const Patch &patch) {
        double total = 0.0;
        for (double r : per_particle(patch)) total += r;
        return total;
    };
    m.outcome = [per_particle, dim, jr](Patch &patch, LabelStream &labels) {
        const auto rates = per_particle(patch);
        double total = 0.0;
        for (double r : rates) total += r;
        double pick = labels.next() * total;
        std::size_t idx = 0;
        for (; idx + 1 < rates.size(); ++idx) {
            if (pick < rates[idx]) break;
            pick -= rates[idx];
        }
        PointSet &pts = points_of(patch.center());
        std::array<double, kMaxDim> dest = pts[idx].pos;
        if (dim == 1) {
            dest[0] += (2.0 * labels.next() - 1.0) * jr;
        } else {
            const double r = jr * std::sqrt(labels.next());
            const double ang = 2.0 * M_PI * labels.next();
            dest[0] += r * std::cos(ang);
            dest[1] += r * std::sin(ang);
        }
        const double mark = pts[idx].mark;
        pts.erase(pts.begin() + std::ptrdiff_t(idx));
        insert_patch_point(patch, dest, mark, dim);
    };
    return m;
}

JumpModel voter_continuum(const VoterParams &p) {
    if (!(p.lambda > 0.0)) throw ConfigError("voter: lambda must be > 0");
    if (p.copy_prob < 0.0 || p.copy_prob > 1.0)
        throw ConfigError("voter: copy probability must lie in [0,1]");
    if (!(p.range > 0.0)) throw ConfigError("voter: range must be > 0");
    const char *name = p.variant == VoterVariant::uniform_copy ? "voter_I" : "voter_II";
    JumpModel m(name, NeighborhoodTemplate::cube_reach(p.dim, p.range), p.lambda);
    m.default_state = LocalState(PointSet{});
    const double lambda = p.lambda, prob = p.copy_prob, r2 = p.range * p.range;
    const int dim = p.dim;
    const bool nearest = p.variant == VoterVariant::nearest_copy;
    m.rate = [lambda](const Patch &) { return lambda; };
    m.outcome = [prob, r2, dim, nearest](Patch &patch, LabelStream &labels) {
        const auto pos = uniform_in_cube(labels, dim);
        std::vector<const PatchPoint *> in_range;
        const auto all = patch_points(patch);
        for (const PatchPoint &pp : all)
            if (sq_dist(pos, pp.pos, dim) <= r2) in_range.push_back(&pp);
        double color;
        if (nearest) {
            const PatchPoint *best = nullptr;
            double best_d = std::numeric_limits<double>::infinity();
            for (const PatchPoint *pp : in_range) {
                const double d = sq_dist(pos, pp->pos, dim);
                if (d < best_d) {
                    best_d = d;
                    best = pp;
                }
            }
            color = best ? best->mark : (labels.next() < 0.5 ? 0.0 : 1.0);
        } else {
            const double u = labels.next();
            if (!in_range.empty() && u < prob) {
                const std::size_t idx = std::min(
                    in_range.size() - 1, std::size_t(labels.next() * double(in_range.size())));
                color = in_range[idx]->mark;
            } else {
                color = labels.next() < 0.5 ? 0.0 : 1.0;
            }
        }
        points_of(patch.center()).push_back(MarkedPoint{pos, color});
    };
    return m;
}

// ---------------------------------------------------------------------------
// cube embedding
// ---------------------------------------------------------------------------

Site cube_of(const std::array<double, kMaxDim> &pos, int dim) {
    Site v{0, 0, 0};
    for (int i = 0; i < dim; ++i) v[std::size_t(i)] = std::int32_t(std::floor(pos[std::size_t(i)]));
    return v;
}

Configuration embed(const std::vector<GlobalPoint> &points, const SiteSet &region, int dim) {
    Configuration config(region, LocalState(PointSet{}));
    for (const GlobalPoint &gp : points) {
        const Site v = cube_of(gp.pos, dim);
        if (!contains(region, v))
            throw RegionError("point outside the embedding region at cube " +
                              to_string(v, dim));
        MarkedPoint mp;
        for (int i = 0; i < dim; ++i)
            mp.pos[std::size_t(i)] = gp.pos[std::size_t(i)] - std::floor(gp.pos[std::size_t(i)]);
        mp.mark = gp.mark;
        LocalState s = config.at(v);
        points_of(s).push_back(mp);
        config.set(v, std::move(s));
    }
    return config;
}

std::vector<GlobalPoint> unembed(const Configuration &config, int dim) {
    std::vector<GlobalPoint> out;
    for (const Site &v : config.region()) {
        for (const MarkedPoint &mp : points_of(config.at(v))) {
            GlobalPoint gp;
            for (int i = 0; i < dim; ++i)
                gp.pos[std::size_t(i)] = double(v[std::size_t(i)]) + mp.pos[std::size_t(i)];
            gp.mark = mp.mark;
            out.push_back(gp);
        }
    }
    return out;
}

}  // namespace ips
