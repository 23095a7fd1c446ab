#include "stencil_lab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "stencil_lab/neighbors.hpp"

namespace stencil_lab {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string library_version() { return STENCIL_LAB_VERSION; }

namespace {

// ---------------------------------------------------------------------------------------------
// Config parsing

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (trim(v.substr(used)).empty()) return i;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

using Setter = void (*)(ExperimentConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"run.name", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.name = v; }},
        {"run.mode",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v == "sweep") c.mode = RunMode::Sweep;
             else if (v == "convergence") c.mode = RunMode::Convergence;
             else throw ConfigError(k + ": expected sweep or convergence, got '" + v + "'");
         }},
        {"domain.shape", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.domain = v; }},
        {"domain.h", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.h = to_double(k, v); }},
        {"domain.seed",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             const long long s = to_int(k, v);
             if (s < 0) throw ConfigError(k + ": seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"domain.generator", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.generator = v; }},
        {"domain.spacing_factor",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.spacing_factor = to_double(k, v); }},
        {"domain.halton_skip",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.halton_skip = static_cast<std::uint64_t>(std::max(0LL, to_int(k, v)));
         }},
        {"domain.halton_count",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.halton_count = static_cast<std::size_t>(std::max(0LL, to_int(k, v)));
         }},
        {"domain.probe_density",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.probe_density = static_cast<int>(to_int(k, v));
         }},
        {"method.kernel", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.kernel = v; }},
        {"method.m", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.m = static_cast<int>(to_int(k, v)); }},
        {"method.max_condition",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.max_condition = v == "inf" ? std::numeric_limits<double>::infinity() : to_double(k, v);
         }},
        {"problem.operator", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.op = v; }},
        {"problem.solution", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.solution = v; }},
        {"problem.bc", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.bc = v; }},
        {"problem.robin_alpha",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.robin_alpha = to_double(k, v); }},
        {"problem.t_hot",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.heat.t_hot = to_double(k, v); }},
        {"problem.t_out",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.heat.t_out = to_double(k, v); }},
        {"problem.conductivity",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.heat.conductivity = to_double(k, v); }},
        {"problem.transfer_coefficient",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.heat.transfer_coefficient = to_double(k, v);
         }},
        {"sweep.n_min",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_min = static_cast<int>(to_int(k, v)); }},
        {"sweep.n_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_max = static_cast<int>(to_int(k, v)); }},
        {"sweep.h_list",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.h_list.clear();
             for (const std::string& item : split_list(v)) c.h_list.push_back(to_double(k, item));
         }},
        {"sweep.n_list",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.n_list.clear();
             for (const std::string& item : split_list(v)) c.n_list.push_back(static_cast<int>(to_int(k, item)));
         }},
        {"region.predicate", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.region = v; }},
        {"region.n_fixed",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_fixed = static_cast<int>(to_int(k, v)); }},
        {"solver.method", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.solver = v; }},
        {"solver.tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.tol = to_double(k, v); }},
        {"solver.jacobi", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.jacobi = to_bool(k, v); }},
        {"imex.enabled", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.imex = to_bool(k, v); }},
        {"imex.m_high",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.m_high = static_cast<int>(to_int(k, v)); }},
        {"imex.inflation",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.imex_inflation = to_double(k, v); }},
        {"output.dir", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output = v; }},
    };
    return table;
}

// JSON arrays arrive as children with empty keys; INI lists are comma separated.
std::string leaf_value(const boost::property_tree::ptree& node) {
    if (node.empty()) return trim(node.data());
    std::string joined;
    for (const auto& [k, child] : node) {
        if (!k.empty() || !child.empty()) throw ConfigError("nested values are not supported in configs");
        joined += (joined.empty() ? "" : ",") + trim(child.data());
    }
    return joined;
}

ojson number_list(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(x);
    return a;
}

ojson int_list(const std::vector<int>& v) {
    ojson a = ojson::array();
    for (int x : v) a.push_back(x);
    return a;
}

ojson config_object(const ExperimentConfig& c) {
    ojson j;
    j["run"] = {{"name", c.name}, {"mode", c.mode == RunMode::Sweep ? "sweep" : "convergence"}};
    j["domain"] = {{"shape", c.domain},
                   {"h", c.h},
                   {"seed", c.seed},
                   {"generator", c.generator},
                   {"spacing_factor", c.spacing_factor},
                   {"halton_skip", c.halton_skip},
                   {"halton_count", c.halton_count},
                   {"probe_density", c.probe_density}};
    j["method"] = {{"kernel", c.kernel}, {"m", c.m}};
    if (std::isinf(c.max_condition)) j["method"]["max_condition"] = "inf";
    else j["method"]["max_condition"] = c.max_condition;
    j["problem"] = {{"operator", c.op},
                    {"solution", c.solution},
                    {"bc", c.bc},
                    {"robin_alpha", c.robin_alpha},
                    {"t_hot", c.heat.t_hot},
                    {"t_out", c.heat.t_out},
                    {"conductivity", c.heat.conductivity},
                    {"transfer_coefficient", c.heat.transfer_coefficient}};
    j["sweep"] = {{"n_min", c.n_min}, {"n_max", c.n_max}, {"h_list", number_list(c.h_list)}, {"n_list", int_list(c.n_list)}};
    j["region"] = {{"predicate", c.region}, {"n_fixed", c.n_fixed}};
    j["solver"] = {{"method", c.solver}, {"tol", c.tol}, {"jacobi", c.jacobi}};
    j["imex"] = {{"enabled", c.imex}, {"m_high", c.m_high}, {"inflation", c.imex_inflation}};
    j["output"] = {{"dir", c.output}};
    return j;
}

std::string ini_value(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ",") + x.dump();
        return s;
    }
    return v.dump();
}

// ---------------------------------------------------------------------------------------------
// Pipeline helpers

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_h(double h) {
    std::ostringstream s;
    s << h;
    return s.str();
}

NodeSetSummary summarize(const NodeSet& raw, const NodeSet& prepared, const Domain& domain, int probe_density) {
    NodeSetSummary s;
    s.h = raw.h;
    s.total = prepared.size();
    for (NodeRole r : prepared.roles) {
        if (r == NodeRole::Interior) ++s.interior;
        else if (r == NodeRole::Ghost) ++s.ghost;
        else ++s.boundary;
    }
    s.quality = quality(raw, domain, probe_density);
    return s;
}

ojson summary_json(const NodeSetSummary& s) {
    return {{"h", s.h},
            {"total", s.total},
            {"interior", s.interior},
            {"boundary", s.boundary},
            {"ghost", s.ghost},
            {"rho", s.quality.rho},
            {"delta", s.quality.delta},
            {"gamma", s.quality.gamma}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed while writing " + path.string());
}

void write_records(const fs::path& path, std::span<const SweepRecord> records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_sweep_csv(out, records);
}

void dump_system(const ExperimentConfig& c, const ProblemSpec& problem, const NodeSet& nodes, int n,
                 const fs::path& dir, std::vector<std::string>& files) {
    const SweepOptions opts = sweep_options(c);
    const SpatialIndex index = build_index(nodes);
    std::vector<int> n_map(nodes.size(), n);
    if (!c.region.empty()) {
        const auto pinned = region_predicate(c.region, problem.domain);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (pinned(nodes.positions[i])) n_map[i] = c.n_fixed;
    }
    const auto stencils = stencils_all(index, nodes, n_map);
    const GlobalSystem sys = assemble(problem, nodes, stencils, opts.kernel, opts.m, opts.weights);
    const std::string stem = c.name + "_n" + std::to_string(n);
    const fs::path mtx = dir / (stem + ".mtx");
    const fs::path rhs = dir / (stem + "_rhs.mtx");
    const fs::path weights = dir / (stem + "_weights.csv");
    write_matrix_market(mtx.string(), rhs.string(), sys);
    std::ofstream w(weights);
    if (!w) throw Error("cannot write " + weights.string());
    write_triplets_csv(w, sys.operator_weights);
    files.insert(files.end(), {mtx.string(), rhs.string(), weights.string()});
}

}  // namespace

// -------------------------------------------------------------------------------------------------

ExperimentConfig parse_config(const std::string& text, const std::string& format) {
    namespace pt = boost::property_tree;
    std::string fmt = format;
    if (fmt == "auto") fmt = trim(text).rfind('{', 0) == 0 ? "json" : "ini";
    pt::ptree tree;
    std::istringstream in(text);
    try {
        if (fmt == "json") pt::read_json(in, tree);
        else if (fmt == "ini") pt::read_ini(in, tree);
        else throw ConfigError("unknown config format '" + format + "'");
    } catch (const pt::file_parser_error& e) {
        throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
    }
    if (const auto inner = tree.get_child_optional("config")) tree = *inner;

    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("top-level key '" + section + "' must be a section");
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const auto it = setters().find(full);
            if (it == setters().end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(c, full, leaf_value(node));
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string ext = fs::path(path).extension().string();
    return parse_config(buffer.str(), ext == ".json" ? "json" : (ext == ".ini" || ext == ".cfg") ? "ini" : "auto");
}

std::string config_to_json(const ExperimentConfig& config) { return config_object(config).dump(2); }

std::string config_to_ini(const ExperimentConfig& config) {
    std::ostringstream out;
    bool first = true;
    const ojson object = config_object(config);
    for (const auto& [section, body] : object.items()) {
        out << (first ? "" : "\n") << '[' << section << "]\n";
        first = false;
        for (const auto& [key, value] : body.items()) out << key << " = " << ini_value(value) << '\n';
    }
    return out.str();
}

int domain_dimension(const std::string& domain) { return make_domain(domain).dimension(); }

void validate(const ExperimentConfig& c) {
    const Domain domain = make_domain(c.domain);
    const int dim = domain.dimension();
    if (!(c.h > 0)) throw ConfigError("domain.h must be positive");
    if (c.generator != "advancing_front" && c.generator != "halton" && c.generator != "polar")
        throw ConfigError("domain.generator must be advancing_front, halton or polar");
    if (c.generator == "polar" && c.domain != "disc") throw ConfigError("the polar generator only fills the disc");
    if (!(c.spacing_factor > 0 && c.spacing_factor <= 1)) throw ConfigError("domain.spacing_factor must lie in (0, 1]");
    parse_kernel(c.kernel);
    if (c.m < 0) throw ConfigError("method.m must be non-negative");
    operator_registry(c.op, dim);
    const BcLayout layout = parse_bc_layout(c.bc);
    if (layout != BcLayout::HeatsinkLite) find_solution(c.solution, dim);
    const int n_poly = static_cast<int>(monomial_count(c.m, dim));
    if (c.mode == RunMode::Sweep) {
        if (c.n_min > c.n_max)
            throw ConfigError("empty sweep range: n_min " + std::to_string(c.n_min) + " > n_max " +
                              std::to_string(c.n_max));
        if (c.n_min < n_poly)
            throw ConfigError("sweep.n_min " + std::to_string(c.n_min) + " is below C(m+d,d) = " +
                              std::to_string(n_poly));
    } else {
        if (c.h_list.size() < 3) throw ConfigError("convergence mode needs at least three values in sweep.h_list");
        for (double h : c.h_list)
            if (!(h > 0)) throw ConfigError("sweep.h_list entries must be positive");
        if (c.n_list.empty()) throw ConfigError("convergence mode needs sweep.n_list");
        for (int n : c.n_list)
            if (n < n_poly) throw ConfigError("sweep.n_list entry " + std::to_string(n) + " is below C(m+d,d)");
    }
    if (!c.region.empty()) {
        region_predicate(c.region, domain);
        if (c.n_fixed < n_poly) throw ConfigError("region.n_fixed must be at least C(m+d,d)");
    }
    if (c.solver != "direct" && c.solver != "bicgstab") throw ConfigError("solver.method must be direct or bicgstab");
    if (!(c.tol > 0)) throw ConfigError("solver.tol must be positive");
    if (c.imex) {
        const int m_high = c.m_high == 0 ? c.m + 2 : c.m_high;
        if (m_high <= c.m) throw ConfigError("imex.m_high must exceed method.m");
        if (!(c.imex_inflation >= 1)) throw ConfigError("imex.inflation must be at least 1");
    }
    if (c.name.empty() || c.name.find('/') != std::string::npos) throw ConfigError("run.name must be a plain file stem");
}

NodeSet generate_nodes(const ExperimentConfig& c, double h) {
    const Domain domain = make_domain(c.domain);
    const auto boundary = discretize_boundary(domain, h);
    AdvancingFrontOptions af;
    af.spacing_factor = c.spacing_factor;
    if (c.generator == "advancing_front") return fill_advancing_front(domain, boundary, h, c.seed, af);
    if (c.generator == "polar") return fill_polar(domain, h, c.seed);
    if (c.generator == "halton") {
        std::size_t count = c.halton_count;
        if (count == 0) count = fill_advancing_front(domain, boundary, h, c.seed, af).interior_count();
        NodeSet ns = fill_halton(domain, boundary, count, c.halton_skip);
        ns.h = h;
        return ns;
    }
    throw ConfigError("unknown generator '" + c.generator + "'");
}

ProblemSpec build_problem(const ExperimentConfig& c) {
    const Domain domain = make_domain(c.domain);
    const int dim = domain.dimension();
    const BcLayout layout = parse_bc_layout(c.bc);
    const SolutionEntry solution =
        layout == BcLayout::HeatsinkLite ? SolutionEntry{} : find_solution(c.solution, dim);
    return make_problem(domain, operator_registry(c.op, dim), solution, layout, c.robin_alpha, c.heat);
}

SweepOptions sweep_options(const ExperimentConfig& c) {
    SweepOptions o;
    o.kernel = parse_kernel(c.kernel);
    o.m = c.m;
    o.solver.method = c.solver == "bicgstab" ? SolverMethod::BiCGSTAB : SolverMethod::DirectLU;
    o.solver.tol = c.tol;
    o.solver.diagonal_scaling = c.jacobi;
    o.weights.max_condition = c.max_condition;
    if (c.imex) o.imex = ImexOptions{c.m_high, c.imex_inflation};
    return o;
}

std::function<bool(const Vec&)> region_predicate(const std::string& id, const Domain& domain) {
    const auto colon = id.find(':');
    const std::string kind = id.substr(0, colon);
    if (colon == std::string::npos || (kind != "outside_radius" && kind != "inside_radius"))
        throw ConfigError("region.predicate must be outside_radius:<r> or inside_radius:<r>, got '" + id + "'");
    const double r = to_double("region.predicate", id.substr(colon + 1));
    const auto [lo, hi] = domain.bounding_box();
    const Vec c = 0.5 * (lo + hi);
    if (kind == "outside_radius") return [c, r](const Vec& x) { return dist(x, c) > r; };
    return [c, r](const Vec& x) { return dist(x, c) <= r; };
}

RunResult run(const ExperimentConfig& config, const RunFlags& flags) {
    using clock = std::chrono::steady_clock;
    in_stage("config", [&] {
        validate(config);
        return 0;
    });
    const auto t_start = clock::now();
    const fs::path dir(config.output);
    in_stage("report", [&] {
        fs::create_directories(dir);
        return 0;
    });

    const Domain domain = make_domain(config.domain);
    const int dim = domain.dimension();
    const int probe = config.probe_density > 0 ? config.probe_density : (dim == 3 ? 32 : 128);
    const ProblemSpec problem = in_stage("problem", [&] { return build_problem(config); });
    const bool has_exact = parse_bc_layout(config.bc) != BcLayout::HeatsinkLite;
    const ScalarField exact_u = has_exact ? find_solution(config.solution, dim).u() : ScalarField{};
    SweepOptions opts = sweep_options(config);
    if (!config.region.empty()) {
        opts.fixed_region = region_predicate(config.region, domain);
        opts.n_fixed = config.n_fixed;
    }

    RunResult result;
    double t_generate = 0, t_sweep = 0;
    std::vector<int> failed_n;
    const std::vector<double> hs = config.mode == RunMode::Sweep ? std::vector<double>{config.h} : config.h_list;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const double h = hs[k];
        auto t0 = clock::now();
        const NodeSet raw = in_stage("generate", [&] { return generate_nodes(config, h); });
        const NodeSet nodes = in_stage("problem", [&] { return prepare_nodes(raw, problem); });
        result.node_sets.push_back(in_stage("generate", [&] { return summarize(raw, nodes, domain, probe); }));
        t_generate += seconds_since(t0);

        if (flags.write_nodes) {
            const fs::path p = dir / (config.name + (hs.size() > 1 ? "_h" + format_h(h) : "") + ".nodes.csv");
            in_stage("report", [&] {
                std::ofstream out(p);
                if (!out) throw Error("cannot write " + p.string());
                write_nodes_csv(out, nodes);
                return 0;
            });
            result.files.push_back(p.string());
        }
        if (flags.dump_system && k == 0) {
            const int n = flags.dump_n > 0
                              ? flags.dump_n
                              : (config.mode == RunMode::Sweep ? config.n_min : config.n_list.front());
            in_stage("report", [&] {
                dump_system(config, problem, nodes, n, dir, result.files);
                return 0;
            });
        }

        t0 = clock::now();
        if (config.mode == RunMode::Sweep) {
            result.records = in_stage(
                "sweep", [&] { return stencil_sweep(problem, nodes, config.n_min, config.n_max, opts, exact_u); });
            for (const SweepRecord& r : result.records)
                if (r.failed) failed_n.push_back(r.n);
        } else {
            std::vector<SweepRecord> per_h;
            for (int n : config.n_list) {
                const auto rec = in_stage("sweep", [&] { return stencil_sweep(problem, nodes, n, n, opts, exact_u); });
                if (rec.front().failed) failed_n.push_back(n);
                per_h.push_back(rec.front());
            }
            result.by_h.push_back(std::move(per_h));
        }
        t_sweep += seconds_since(t0);
    }

    const auto t0 = clock::now();
    in_stage("report", [&] {
        if (config.mode == RunMode::Sweep) {
            const fs::path p = dir / (config.name + ".csv");
            write_records(p, result.records);
            result.files.push_back(p.string());
        } else {
            for (std::size_t k = 0; k < hs.size(); ++k) {
                const fs::path p = dir / (config.name + "_h" + format_h(hs[k]) + ".csv");
                write_records(p, result.by_h[k]);
                result.files.push_back(p.string());
            }
            std::ostringstream fit_csv;
            fit_csv << "n,slope,intercept,r_squared\n" << std::setprecision(10);
            for (std::size_t j = 0; j < config.n_list.size(); ++j) {
                std::vector<double> e;
                for (const auto& per_h : result.by_h) e.push_back(per_h[j].e_max_poiss);
                ConvergenceFit fit;
                try {
                    fit = fit_convergence(hs, e);
                } catch (const InputError&) {
                    fit.slope = fit.intercept = fit.r_squared = std::numeric_limits<double>::quiet_NaN();
                }
                fit_csv << config.n_list[j] << ',' << fit.slope << ',' << fit.intercept << ',' << fit.r_squared
                        << '\n';
                result.fits.push_back(fit);
            }
            const fs::path p = dir / (config.name + "_fit.csv");
            write_text(p, fit_csv.str());
            result.files.push_back(p.string());
        }

        ojson manifest;
        manifest["tool"] = "stencil-lab";
        manifest["version"] = library_version();
        manifest["csv_schema_version"] = kCsvSchemaVersion;
        manifest["csv_columns"] = {"n",        "e_max_poiss", "e_avg_poiss", "e_max_lap",
                                   "e_avg_lap", "dN_poiss",   "dN_lap",      "wall_time_s"};
        manifest["config"] = config_object(config);
        manifest["node_sets"] = ojson::array();
        for (const NodeSetSummary& s : result.node_sets) manifest["node_sets"].push_back(summary_json(s));
        manifest["failed_n"] = failed_n;
        manifest["timings_s"] = {{"generate", t_generate}, {"sweep", t_sweep}, {"report", seconds_since(t0)},
                                 {"total", seconds_since(t_start)}};
        manifest["outputs"] = result.files;
        const fs::path p = dir / (config.name + ".manifest.json");
        write_text(p, manifest.dump(2) + "\n");
        result.files.push_back(p.string());
        return 0;
    });
    return result;
}

bool PresetReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<double> column(std::span<const SweepRecord> records, double SweepRecord::*field) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const SweepRecord& r : records) v.push_back(r.failed ? std::numeric_limits<double>::quiet_NaN() : r.*field);
    return v;
}

bool has_extremum_in(std::span<const SweepRecord> records, double SweepRecord::*field, bool minima, int lo, int hi) {
    const std::vector<double> v = column(records, field);
    for (std::size_t i : local_extrema(v, minima))
        if (records[i].n >= lo && records[i].n <= hi) return true;
    return false;
}

}  // namespace stencil_lab
