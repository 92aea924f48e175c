#include "ips/registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ips {

namespace {

std::vector<ModelEntry> make_model_registry() {
    std::vector<ModelEntry> entries = {
        {"exclusion",
         "continuum exclusion: jump attempts blocked within eps of the destination",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "per-particle attempt rate"},
          {"eps", 0.5, 1e-9, 100.0, false, "hard-core spacing"},
          {"jump_radius", 0.5, 1e-9, 100.0, false, "jump law radius"},
          {"dim", 1, 1, 2, true, "spatial dimension"}}},
        {"lattice_bd",
         "lattice ballistic deposition: land at 1 + max neighborhood height",
         false,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival rate per site"},
          {"dim", 1, 1, 3, true, "lattice dimension"},
          {"range", 1, 0, 4, true, "neighborhood range (box)"}}},
        {"lattice_bd_relaxed",
         "deposition with surface relaxation: lowest neighborhood site gains 1",
         false,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival rate per site"},
          {"dim", 1, 1, 3, true, "lattice dimension"},
          {"range", 1, 1, 4, true, "neighborhood range (box)"}}},
        {"monolayer_bd_rolling_1d",
         "monolayer deposition with rolling to the substrate (d = 1)",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival intensity per unit length"},
          {"range", 2.0, 2.0, 16.0, false, "interaction range R"}}},
        {"multilayer_bd_stick",
         "multilayer deposition: balls stick at first contact",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival intensity per unit volume"},
          {"dim", 1, 1, 2, true, "substrate dimension"},
          {"range", 1.0, 1.0, 16.0, false, "interaction range R"}}},
        {"rsa",
         "random sequential adsorption with optional desorption",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival intensity per unit volume"},
          {"desorption", 0.0, 0.0, 1e6, false, "per-particle death rate"},
          {"dim", 1, 1, 2, true, "spatial dimension"},
          {"range", 1.0, 1.0, 16.0, false, "interaction range R"}}},
        {"spin_flip",
         "independent two-state flips (exact-oracle reference chain)",
         false,
         {{"rate", 1.0, 1e-12, 1e6, false, "flip rate"},
          {"dim", 1, 1, 3, true, "lattice dimension"}}},
        {"voter_I",
         "continuum voter: copy a uniform neighbor's color with probability p",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival intensity per unit volume"},
          {"range", 1.0, 1e-9, 16.0, false, "neighbor search radius R"},
          {"p", 1.0, 0.0, 1.0, false, "copy probability"},
          {"dim", 1, 1, 2, true, "spatial dimension"}}},
        {"voter_II",
         "continuum voter: copy the nearest neighbor's color",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "arrival intensity per unit volume"},
          {"range", 1.0, 1e-9, 16.0, false, "neighbor search radius R"},
          {"dim", 1, 1, 2, true, "spatial dimension"}}},
        {"zero_range",
         "continuum zero range: jump rate lambda/(n+1) with n crowding neighbors",
         true,
         {{"lambda", 1.0, 1e-12, 1e6, false, "base jump rate"},
          {"eps", 0.5, 1e-9, 100.0, false, "crowding radius"},
          {"jump_radius", 0.5, 1e-9, 100.0, false, "jump law radius"},
          {"dim", 1, 1, 2, true, "spatial dimension"}}},
    };
    std::sort(entries.begin(), entries.end(),
              [](const ModelEntry &a, const ModelEntry &b) { return a.name < b.name; });
    return entries;
}

std::vector<FunctionalEntry> make_functional_registry() {
    std::vector<FunctionalEntry> entries = {
        {"one", "H == 1 (counts window sites)", false, {}},
        {"height_moment",
         "(center height)^k for lattice models",
         false,
         {{"k", 1, 0, 8, true, "moment order"}}},
        {"phi1", "counts accepted points", true, {}},
        {"phi2",
         "half the neighbors within r1 (pair count)",
         true,
         {{"r1", 1.0, 1.0, 16.0, false, "pair radius"}}},
        {"phi3",
         "indicator of height at most r3",
         true,
         {{"r3", 0.5, 1e-9, 1e6, false, "height threshold"}}},
        {"phi4", "half the touching neighbors (contact count)", true, {}},
        {"phi5", "height if exposed to incoming arrivals, else 0 (d = 1)", true, {}},
    };
    std::sort(entries.begin(), entries.end(),
              [](const FunctionalEntry &a, const FunctionalEntry &b) { return a.name < b.name; });
    return entries;
}

int as_int(double v) { return int(std::llround(v)); }

/// Largest functional radius that fits inside the model's template.
bool radius_fits(const NeighborhoodTemplate &tmpl, double radius) {
    const auto needed = NeighborhoodTemplate::cube_reach(tmpl.dim(), radius);
    return is_subset(needed.offsets(), tmpl.offsets());
}

}  // namespace

const std::vector<ModelEntry> &model_registry() {
    static const std::vector<ModelEntry> registry = make_model_registry();
    return registry;
}

const std::vector<FunctionalEntry> &functional_registry() {
    static const std::vector<FunctionalEntry> registry = make_functional_registry();
    return registry;
}

const ModelEntry *find_model(const std::string &name) {
    for (const auto &e : model_registry())
        if (e.name == name) return &e;
    return nullptr;
}

const FunctionalEntry *find_functional(const std::string &name) {
    for (const auto &e : functional_registry())
        if (e.name == name) return &e;
    return nullptr;
}

ParamMap resolve_params(const std::vector<ParamSpec> &schema, const ParamMap &given,
                        const std::string &context) {
    ParamMap out;
    for (const ParamSpec &spec : schema) out[spec.key] = spec.def;
    for (const auto &[key, value] : given) {
        const ParamSpec *spec = nullptr;
        for (const ParamSpec &s : schema)
            if (s.key == key) spec = &s;
        if (!spec) {
            std::string known;
            for (const ParamSpec &s : schema) known += (known.empty() ? "" : ", ") + s.key;
            throw ConfigError(context + ": unknown parameter '" + key + "' (accepts: " +
                              (known.empty() ? "none" : known) + ")");
        }
        if (value < spec->min || value > spec->max)
            throw ConfigError(context + ": parameter '" + key + "' out of range [" +
                              std::to_string(spec->min) + ", " + std::to_string(spec->max) + "]");
        if (spec->integer && value != std::floor(value))
            throw ConfigError(context + ": parameter '" + key + "' must be an integer");
        out[key] = value;
    }
    return out;
}

JumpModel build_model(const std::string &name, const ParamMap &params) {
    const ModelEntry *entry = find_model(name);
    if (!entry) {
        std::string names;
        for (const auto &e : model_registry()) names += (names.empty() ? "" : ", ") + e.name;
        throw ConfigError("unknown model '" + name + "' (available: " + names + ")");
    }
    const ParamMap p = resolve_params(entry->params, params, "model " + name);
    if (name == "lattice_bd")
        return lattice_bd(p.at("lambda"), as_int(p.at("dim")), as_int(p.at("range")));
    if (name == "lattice_bd_relaxed")
        return lattice_bd_relaxed(p.at("lambda"), as_int(p.at("dim")), as_int(p.at("range")));
    if (name == "spin_flip") return spin_flip(p.at("rate"), as_int(p.at("dim")));
    if (name == "rsa")
        return rsa({p.at("lambda"), p.at("desorption"), as_int(p.at("dim")), p.at("range")});
    if (name == "multilayer_bd_stick")
        return multilayer_bd_stick({p.at("lambda"), as_int(p.at("dim")), p.at("range")});
    if (name == "monolayer_bd_rolling_1d")
        return monolayer_bd_rolling_1d({p.at("lambda"), p.at("range")});
    if (name == "exclusion")
        return continuum_exclusion(
            {p.at("lambda"), p.at("eps"), p.at("jump_radius"), as_int(p.at("dim"))});
    if (name == "zero_range")
        return zero_range({p.at("lambda"), p.at("eps"), p.at("jump_radius"), as_int(p.at("dim"))});
    if (name == "voter_I")
        return voter_continuum({p.at("lambda"), p.at("range"), p.at("p"),
                                VoterVariant::uniform_copy, as_int(p.at("dim"))});
    if (name == "voter_II")
        return voter_continuum({p.at("lambda"), p.at("range"), 1.0, VoterVariant::nearest_copy,
                                as_int(p.at("dim"))});
    throw ConfigError("model '" + name + "' has no builder");
}

LocalFunctional build_functional(const std::string &name, const ParamMap &params,
                                 const JumpModel &model) {
    const FunctionalEntry *entry = find_functional(name);
    if (!entry) {
        std::string names;
        for (const auto &e : functional_registry()) names += (names.empty() ? "" : ", ") + e.name;
        throw ConfigError("unknown functional '" + name + "' (available: " + names + ")");
    }
    const bool model_continuum = !is_height(model.default_state);
    if (entry->continuum && !model_continuum)
        throw ConfigError("functional '" + name + "' needs a continuum model");
    if (name == "height_moment" && model_continuum)
        throw ConfigError("functional 'height_moment' needs a lattice model");
    const ParamMap p = resolve_params(entry->params, params, "functional " + name);

    if (name == "one") return one_functional();
    if (name == "height_moment") return height_moment(as_int(p.at("k")));

    PointFunctional phi;
    if (name == "phi1")
        phi = phi1();
    else if (name == "phi2")
        phi = phi2(p.at("r1"), std::max(1.0, p.at("r1")));
    else if (name == "phi3")
        phi = phi3(p.at("r3"), 0.0);  // reads only the mark
    else if (name == "phi4")
        phi = phi4(1.0, model.tmpl.dim());
    else if (name == "phi5")
        phi = phi5(2.0, model.tmpl.dim());
    else
        throw ConfigError("functional '" + name + "' has no builder");
    if (!radius_fits(model.tmpl, phi.radius))
        throw ConfigError("functional '" + name + "' needs interaction range >= " +
                          std::to_string(phi.radius) + "; increase the model's range parameter");
    return to_local_functional(phi, model.tmpl.dim());
}

InitialDistribution build_init(const std::string &name, const JumpModel &model) {
    if (name == "empty") return InitialDistribution::empty_for(model);
    if (name == "center_point") {
        if (is_height(model.default_state))
            throw ConfigError("init 'center_point' needs a continuum model");
        return InitialDistribution::center_point(model.tmpl.dim());
    }
    throw ConfigError("unknown init '" + name + "' (available: center_point, empty)");
}

std::string registry_listing() {
    std::ostringstream os;
    os << "models:\n";
    for (const auto &e : model_registry()) {
        os << "  " << e.name << " - " << e.help << "\n";
        for (const auto &p : e.params)
            os << "    " << p.key << " (default " << p.def << "): " << p.help << "\n";
    }
    os << "functionals:\n";
    for (const auto &e : functional_registry()) {
        os << "  " << e.name << " - " << e.help << "\n";
        for (const auto &p : e.params)
            os << "    " << p.key << " (default " << p.def << "): " << p.help << "\n";
    }
    return os.str();
}

}  // namespace ips
