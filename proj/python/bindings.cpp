// Python bindings for the simulation core: lattice geometry, the model and
// functional registries, windowed simulation, and the experiment drivers.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ips/config.hpp"
#include "ips/harness.hpp"

namespace py = pybind11;
using namespace ips;

namespace {

Site site_from(const std::vector<std::int32_t> &coords) {
    Site s{0, 0, 0};
    if (coords.size() > std::size_t(kMaxDim))
        throw ConfigError("site has too many coordinates");
    for (std::size_t i = 0; i < coords.size(); ++i) s[i] = coords[i];
    return s;
}

std::vector<std::int32_t> site_to(const Site &s, int dim) {
    return std::vector<std::int32_t>(s.begin(), s.begin() + dim);
}

py::list sites_to(const SiteSet &sites, int dim) {
    py::list out;
    for (const Site &v : sites) out.append(site_to(v, dim));
    return out;
}

struct PyModel {
    JumpModel model;
    ParamMap params;
    std::string init = "empty";
};

PyModel make_model(const std::string &name, const ParamMap &params,
                   const std::string &init) {
    PyModel m{build_model(name, params), params, init};
    build_init(init, m.model);  // validate early
    return m;
}

ExperimentPlan make_plan(const PyModel &m, const std::string &functional,
                         const ParamMap &functional_params, std::vector<int> radii, double tau,
                         std::vector<double> times, std::size_t replicates, std::uint64_t seed,
                         int workers) {
    const LocalFunctional H = build_functional(functional, functional_params, m.model);
    if (times.empty()) times = {tau};
    return ExperimentPlan::make(m.model, H, std::move(radii), tau, std::move(times), replicates,
                                seed, build_init(m.init, m.model), workers);
}

py::dict lln_to_dict(const LlnReport &report) {
    py::dict out;
    py::list rows;
    for (const auto &row : report.rows) {
        py::dict r;
        r["radius"] = row.radius;
        r["window_size"] = row.window_size;
        r["mean"] = row.mean;
        r["std_err"] = row.se;
        rows.append(r);
    }
    out["rows"] = rows;
    out["stabilized"] = report.stabilized;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "graphical-representation simulator for finite-range particle systems";

    py::register_exception<Error>(m, "IpsError");

    // ---- geometry ----
    py::class_<NeighborhoodTemplate>(m, "NeighborhoodTemplate")
        .def_static("box", &NeighborhoodTemplate::box, py::arg("dim"), py::arg("range"))
        .def_static("cube_reach", &NeighborhoodTemplate::cube_reach, py::arg("dim"),
                    py::arg("reach"))
        .def_property_readonly("dim", &NeighborhoodTemplate::dim)
        .def_property_readonly("degree", &NeighborhoodTemplate::degree)
        .def("offsets", [](const NeighborhoodTemplate &t) {
            return sites_to(t.offsets(), t.dim());
        });

    py::class_<Window>(m, "Window")
        .def_static("box", &Window::box, py::arg("dim"), py::arg("radius"))
        .def(py::init([](const std::vector<std::vector<std::int32_t>> &sites) {
                 SiteSet out;
                 for (const auto &coords : sites) out.push_back(site_from(coords));
                 return Window(out);
             }),
             py::arg("sites"))
        .def_property_readonly("size", &Window::size);

    m.def(
        "neighborhood",
        [](const Window &A, const NeighborhoodTemplate &N) {
            return sites_to(neighborhood(A, N), N.dim());
        },
        py::arg("window"), py::arg("template"));
    m.def(
        "exterior_boundary",
        [](const Window &A, const NeighborhoodTemplate &N) {
            return sites_to(exterior_boundary(A, N), N.dim());
        },
        py::arg("window"), py::arg("template"));
    m.def(
        "interior",
        [](const Window &A, const NeighborhoodTemplate &N) {
            return sites_to(interior(A, N), N.dim());
        },
        py::arg("window"), py::arg("template"));
    m.def(
        "two_neighborhood",
        [](const std::vector<std::int32_t> &v, const NeighborhoodTemplate &N) {
            return sites_to(two_neighborhood(site_from(v), N), N.dim());
        },
        py::arg("site"), py::arg("template"));
    m.def(
        "check_window_sequence",
        [](const std::vector<int> &radii, const NeighborhoodTemplate &N) {
            std::vector<Window> windows;
            for (int r : radii) windows.push_back(Window::box(N.dim(), r));
            const auto report = check_window_sequence(windows, N);
            py::list entries;
            for (const auto &e : report.entries) {
                py::dict d;
                d["window_size"] = e.window_size;
                d["boundary_size"] = e.boundary_size;
                d["boundary_ratio"] = e.boundary_ratio;
                d["interior_consistent"] = e.interior_consistent;
                entries.append(d);
            }
            py::dict out;
            out["entries"] = entries;
            out["ratio_decreasing"] = report.ratio_decreasing;
            out["all_interior_consistent"] = report.all_interior_consistent;
            return out;
        },
        py::arg("radii"), py::arg("template"));

    // ---- models and registry ----
    py::class_<PyModel>(m, "Model")
        .def_property_readonly("name", [](const PyModel &m_) { return m_.model.name; })
        .def_property_readonly("c_max", [](const PyModel &m_) { return m_.model.c_max; })
        .def_property_readonly("dim", [](const PyModel &m_) { return m_.model.tmpl.dim(); });

    m.def("build_model", &make_model, py::arg("name"), py::arg("params") = ParamMap{},
          py::arg("init") = "empty");
    m.def("registry_listing", &registry_listing);
    m.def("list_models", [] {
        std::vector<std::string> names;
        for (const auto &e : model_registry()) names.push_back(e.name);
        return names;
    });
    m.def("list_functionals", [] {
        std::vector<std::string> names;
        for (const auto &e : functional_registry()) names.push_back(e.name);
        return names;
    });

    // ---- simulation ----
    m.def(
        "simulate_points",
        [](const PyModel &m_, int radius, double tau, std::uint64_t seed) {
            if (is_height(m_.model.default_state))
                throw ConfigError("simulate_points needs a continuum model");
            const Window A = Window::box(m_.model.tmpl.dim(), radius);
            const Trajectory traj = simulate_window(m_.model, A,
                                                    build_init(m_.init, m_.model), tau, seed);
            py::list out;
            for (const auto &gp : unembed(traj.final_state, m_.model.tmpl.dim())) {
                py::dict d;
                d["pos"] = std::vector<double>(gp.pos.begin(),
                                               gp.pos.begin() + m_.model.tmpl.dim());
                d["mark"] = gp.mark;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("radius"), py::arg("tau"), py::arg("seed"));
    m.def(
        "simulate_heights",
        [](const PyModel &m_, int radius, double tau, std::uint64_t seed) {
            if (!is_height(m_.model.default_state))
                throw ConfigError("simulate_heights needs a lattice model");
            const Window A = Window::box(m_.model.tmpl.dim(), radius);
            const Trajectory traj = simulate_window(m_.model, A,
                                                    build_init(m_.init, m_.model), tau, seed);
            py::dict out;
            for (const Site &v : A.sites())
                out[py::tuple(py::cast(site_to(v, m_.model.tmpl.dim())))] =
                    height_of(traj.final_state.at(v));
            return out;
        },
        py::arg("model"), py::arg("radius"), py::arg("tau"), py::arg("seed"));

    // ---- experiment drivers ----
    m.def(
        "run_lln",
        [](const PyModel &m_, const std::string &functional, const ParamMap &fparams,
           const std::vector<int> &radii, double tau, std::size_t replicates,
           std::uint64_t seed, int workers) {
            return lln_to_dict(
                run_lln(make_plan(m_, functional, fparams, radii, tau, {tau}, replicates, seed,
                                  workers)));
        },
        py::arg("model"), py::arg("functional"), py::arg("functional_params") = ParamMap{},
        py::arg("radii") = std::vector<int>{4, 8}, py::arg("tau") = 1.0,
        py::arg("replicates") = 100, py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "run_clt",
        [](const PyModel &m_, const std::string &functional, const ParamMap &fparams,
           const std::vector<int> &radii, double tau, const std::vector<double> &times,
           std::size_t replicates, std::uint64_t seed, int workers) {
            const CltReport report = run_clt(
                make_plan(m_, functional, fparams, radii, tau, times, replicates, seed,
                          workers));
            py::list rows;
            for (const auto &row : report.rows) {
                py::dict r;
                r["window_size"] = row.window_size;
                r["s"] = row.s;
                r["t"] = row.t;
                r["cov_scaled"] = row.cov_scaled;
                r["skew"] = row.skew;
                r["ex_kurtosis"] = row.ex_kurtosis;
                r["gof_stat"] = row.gof_stat;
                rows.append(r);
            }
            py::dict out;
            out["rows"] = rows;
            out["degenerate_variance"] = report.degenerate_variance;
            return out;
        },
        py::arg("model"), py::arg("functional"), py::arg("functional_params") = ParamMap{},
        py::arg("radii") = std::vector<int>{4, 8}, py::arg("tau") = 1.0,
        py::arg("times") = std::vector<double>{}, py::arg("replicates") = 1000,
        py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "estimate_sigma",
        [](const PyModel &m_, const std::string &functional, const ParamMap &fparams,
           int radius, double s, double t, std::size_t replicates, std::uint64_t seed,
           int truncation_radius, int workers) {
            const SigmaReport report = estimate_sigma(
                make_plan(m_, functional, fparams, {radius}, std::max(s, t), {s, t}, replicates,
                          seed, workers),
                s, t, truncation_radius);
            py::dict out;
            out["sigma_scaling"] = report.sigma_scaling;
            out["sigma_sum"] = report.sigma_sum;
            out["se_a"] = report.se_a;
            out["se_b"] = report.se_b;
            out["agree"] = report.agree;
            out["truncation_warning"] = report.truncation_warning;
            return out;
        },
        py::arg("model"), py::arg("functional"), py::arg("functional_params") = ParamMap{},
        py::arg("radius") = 50, py::arg("s") = 0.5, py::arg("t") = 1.0,
        py::arg("replicates") = 1000, py::arg("seed") = 0, py::arg("truncation_radius") = 4,
        py::arg("workers") = 1);
    m.def(
        "cluster_tail",
        [](const PyModel &m_, const std::vector<int> &n_values, std::size_t replicates,
           std::uint64_t seed, int workers) {
            const double delta = cluster_delta(m_.model);
            const ClusterReport report =
                cluster_tail_probe(m_.model, delta, n_values, replicates, seed, workers);
            py::list rows;
            for (const auto &row : report.rows) {
                py::dict r;
                r["n"] = row.n;
                r["time"] = row.time;
                r["empirical_p"] = row.empirical_p;
                r["bound"] = row.bound;
                r["within_bound"] = row.within_bound;
                rows.append(r);
            }
            py::dict out;
            out["delta"] = delta;
            out["rows"] = rows;
            out["all_within_bound"] = report.all_within_bound;
            return out;
        },
        py::arg("model"), py::arg("n_values") = std::vector<int>{1, 2, 3},
        py::arg("replicates") = 2000, py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "coupling_check",
        [](const PyModel &m_, int inner_radius, int outer_radius, double tau,
           std::size_t replicates, std::uint64_t seed, int workers) {
            const int dim = m_.model.tmpl.dim();
            const CoupleReport report = coupling_check(
                m_.model, Window::box(dim, inner_radius), Window::box(dim, outer_radius),
                build_init(m_.init, m_.model), tau, SiteSet{Site{0, 0, 0}}, replicates, seed,
                workers);
            py::dict out;
            out["hypothesis_met"] = report.hypothesis_met;
            out["violations"] = report.violations;
            out["replicates"] = replicates;
            return out;
        },
        py::arg("model"), py::arg("inner_radius"), py::arg("outer_radius"), py::arg("tau") = 1.0,
        py::arg("replicates") = 100, py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "oracle_compare",
        [](const PyModel &m_, const std::string &functional, const ParamMap &fparams,
           int radius, double tau, std::int64_t cap, std::size_t replicates,
           std::uint64_t seed, int workers) {
            const OracleReport report = oracle_compare(
                make_plan(m_, functional, fparams, {radius}, tau, {tau}, replicates, seed,
                          workers),
                cap);
            py::dict out;
            out["simulated"] = report.simulated;
            out["exact"] = report.exact;
            out["z"] = report.z;
            out["sink_mass"] = report.sink_mass;
            out["pass"] = report.pass;
            return out;
        },
        py::arg("model"), py::arg("functional"), py::arg("functional_params") = ParamMap{},
        py::arg("radius") = 0, py::arg("tau") = 0.5, py::arg("cap") = 6,
        py::arg("replicates") = 10000, py::arg("seed") = 0, py::arg("workers") = 1);

    // ---- config front end ----
    m.def("validate_config", [](const std::string &text) {
        const ParseResult result = parse_config(text);
        py::list issues;
        for (const auto &issue : result.issues) {
            py::dict d;
            d["line"] = issue.line;
            d["message"] = issue.message;
            issues.append(d);
        }
        return issues;
    });
}
