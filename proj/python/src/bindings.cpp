#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stencil_lab/experiment.hpp"

namespace py = pybind11;
using namespace stencil_lab;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> positions_array(const std::vector<Vec>& pts, int dim) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), static_cast<py::ssize_t>(dim)});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int d = 0; d < dim; ++d) a(static_cast<py::ssize_t>(i), d) = pts[i][static_cast<std::size_t>(d)];
    return out;
}

std::vector<Vec> to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr, int& dim) {
    if (arr.ndim() == 1) {
        dim = 1;
        std::vector<Vec> pts(static_cast<std::size_t>(arr.shape(0)), Vec{});
        for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts[static_cast<std::size_t>(i)][0] = arr.at(i);
        return pts;
    }
    if (arr.ndim() != 2 || arr.shape(1) < 1 || arr.shape(1) > 3) throw InputError("points must have shape (n, d), d in 1..3");
    dim = static_cast<int>(arr.shape(1));
    std::vector<Vec> pts(static_cast<std::size_t>(arr.shape(0)), Vec{});
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        for (int d = 0; d < dim; ++d) pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = arr.at(i, d);
    return pts;
}

Vec to_vec(const std::vector<double>& v) {
    if (v.empty() || v.size() > 3) throw InputError("a point needs 1 to 3 coordinates");
    Vec x{};
    std::copy(v.begin(), v.end(), x.begin());
    return x;
}

py::dict node_dict(const NodeSet& ns) {
    py::dict d;
    d["positions"] = positions_array(ns.positions, ns.dim);
    d["normals"] = positions_array(ns.normals, ns.dim);
    std::vector<std::string> roles;
    for (NodeRole r : ns.roles) roles.push_back(role_name(r));
    d["roles"] = roles;
    d["corners"] = std::vector<bool>(ns.corners.begin(), ns.corners.end());
    d["h"] = ns.h;
    d["seed"] = ns.seed;
    d["interior_count"] = ns.interior_count();
    return d;
}

ExperimentConfig config_from(const py::object& cfg) {
    if (py::isinstance<py::str>(cfg)) return parse_config(cfg.cast<std::string>());
    const std::string text = py::module_::import("json").attr("dumps")(cfg).cast<std::string>();
    return parse_config(text, "json");
}

py::dict records_dict(const std::vector<SweepRecord>& recs) {
    std::vector<int> n;
    std::vector<double> cols[8];
    std::vector<bool> failed;
    for (const SweepRecord& r : recs) {
        n.push_back(r.n);
        const double v[8] = {r.e_max_poiss, r.e_avg_poiss, r.e_max_lap, r.e_avg_lap,
                             r.dN_poiss,    r.dN_lap,      r.wall_time_s, r.imex_avg};
        for (int k = 0; k < 8; ++k) cols[k].push_back(v[k]);
        failed.push_back(r.failed);
    }
    static const char* names[8] = {"e_max_poiss", "e_avg_poiss", "e_max_lap", "e_avg_lap",
                                   "dN_poiss",    "dN_lap",      "wall_time_s", "imex_avg"};
    py::dict d;
    d["n"] = to_array(n);
    for (int k = 0; k < 8; ++k) d[names[k]] = to_array(cols[k]);
    d["failed"] = failed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stencil-size experiments for PHS RBF-FD discretizations";
    m.attr("__version__") = library_version();

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<StageError>(m, "StageError", base.ptr());

    m.def("domain_names", &domain_names, "Names of the built-in domains");
    m.def("preset_names", &preset_names, "Names of the reproduction presets");
    m.def(
        "contains",
        [](const std::string& domain, const std::vector<double>& x) { return contains(make_domain(domain), to_vec(x)); },
        py::arg("domain"), py::arg("x"), "True when x lies strictly inside the domain");

    m.def(
        "nodes",
        [](const std::string& domain, double h, std::uint64_t seed, const std::string& generator) {
            ExperimentConfig c;
            c.domain = domain;
            c.h = h;
            c.seed = seed;
            c.generator = generator;
            c.m = 0;
            c.n_min = c.n_max = 1;
            validate(c);
            NodeSet ns;
            {
                py::gil_scoped_release release;
                ns = generate_nodes(c, h);
            }
            return node_dict(ns);
        },
        py::arg("domain"), py::arg("h"), py::arg("seed") = 1, py::arg("generator") = "advancing_front",
        "Generate a node set; returns positions, normals, roles and corner flags");

    m.def(
        "quality",
        [](const std::string& domain, const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           int probe_density) {
            int dim = 0;
            NodeSet ns;
            const auto pts = to_points(points, dim);
            ns.dim = dim;
            for (const Vec& p : pts) ns.push(p, NodeRole::Interior);
            const QualityMetrics q = quality(ns, make_domain(domain), probe_density);
            return py::dict(py::arg("rho") = q.rho, py::arg("delta") = q.delta, py::arg("gamma") = q.gamma);
        },
        py::arg("domain"), py::arg("points"), py::arg("probe_density") = 128,
        "Fill distance, separation distance and their ratio");

    m.def(
        "weights",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           const std::vector<double>& center, const std::string& op, const std::string& kernel, int degree,
           double max_condition) {
            int dim = 0;
            const auto pts = to_points(points, dim);
            WeightOptions wo;
            wo.max_condition = max_condition;
            const auto w =
                compute_weights(pts, to_vec(center), dim, parse_kernel(kernel), degree, operator_registry(op, dim), wo);
            return to_array(w);
        },
        py::arg("points"), py::arg("center"), py::arg("operator") = "laplacian", py::arg("kernel") = "phs3",
        py::arg("m") = 3, py::arg("max_condition") = 1e14, "RBF-FD weights of an operator at a centre");

    m.def(
        "sweep",
        [](const py::object& cfg) {
            const ExperimentConfig c = config_from(cfg);
            validate(c);
            if (c.mode != RunMode::Sweep) throw ConfigError("sweep() needs run.mode = sweep");
            std::vector<SweepRecord> recs;
            {
                py::gil_scoped_release release;
                const ProblemSpec problem = build_problem(c);
                const NodeSet nodes = prepare_nodes(generate_nodes(c, c.h), problem);
                const bool has_exact = parse_bc_layout(c.bc) != BcLayout::HeatsinkLite;
                const ScalarField exact_u =
                    has_exact ? find_solution(c.solution, domain_dimension(c.domain)).u() : ScalarField{};
                recs = stencil_sweep(problem, nodes, c.n_min, c.n_max, sweep_options(c), exact_u);
            }
            return records_dict(recs);
        },
        py::arg("config"), "Run a stencil-size sweep in memory; config is a dict or INI/JSON text");

    m.def(
        "run",
        [](const py::object& cfg, const std::string& out) {
            ExperimentConfig c = config_from(cfg);
            if (!out.empty()) c.output = out;
            py::gil_scoped_release release;
            return run(c).files;
        },
        py::arg("config"), py::arg("out") = "", "Run an experiment and write CSV and manifest; returns the files");

    m.def(
        "repro",
        [](const std::string& preset, const std::string& out, std::uint64_t seed) {
            PresetReport r;
            {
                py::gil_scoped_release release;
                r = repro(preset, out, seed);
            }
            py::list checks;
            for (const CheckResult& c : r.checks)
                checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed, py::arg("detail") = c.detail));
            return py::dict(py::arg("preset") = r.preset, py::arg("passed") = r.all_passed(), py::arg("checks") = checks,
                            py::arg("files") = r.files);
        },
        py::arg("preset"), py::arg("out") = "repro_out", py::arg("seed") = 1, "Run a named preset and its checks");

    m.def(
        "sign_balance", [](const std::vector<double>& e) { return sign_balance(e); }, py::arg("errors"),
        "(#positive - #negative) / count");
    m.def(
        "local_extrema", [](const std::vector<double>& v, bool minima) { return local_extrema(v, minima); },
        py::arg("values"), py::arg("minima") = true, "Indices of strict local minima (or maxima)");
    m.def(
        "slope_sign_changes", [](const std::vector<double>& v) { return slope_sign_changes(v); }, py::arg("values"));
    m.def(
        "best_minimum_contrast",
        [](const std::vector<double>& v) -> py::object {
            const auto best = best_minimum_contrast(v);
            if (!best) return py::none();
            return py::make_tuple(best->index, best->contrast);
        },
        py::arg("values"), "(index, contrast) of the most pronounced local minimum, or None");
    m.def(
        "fit_convergence",
        [](const std::vector<double>& h, const std::vector<double>& e) {
            const ConvergenceFit f = fit_convergence(h, e);
            return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                            py::arg("r_squared") = f.r_squared);
        },
        py::arg("h"), py::arg("errors"), "Least-squares slope of log e against log h");
}
