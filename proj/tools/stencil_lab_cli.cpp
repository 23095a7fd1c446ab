#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stencil_lab/experiment.hpp"

using namespace stencil_lab;

namespace {

int report_error(const std::string& stage, const std::string& what) {
    std::cerr << "stencil-lab: error [" << stage << "]: " << what << '\n';
    return 2;
}

int cmd_run(const std::string& config_path, const std::string& out, bool dump, int dump_n, bool nodes) {
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const std::exception& e) {
        return report_error("config", e.what());
    }
    if (!out.empty()) config.output = out;
    RunFlags flags;
    flags.dump_system = dump;
    flags.dump_n = dump_n;
    flags.write_nodes = nodes;
    try {
        const RunResult r = run(config, flags);
        for (const std::string& f : r.files) std::cout << f << '\n';
        std::size_t failed = 0;
        for (const SweepRecord& rec : r.records) failed += rec.failed;
        for (const auto& per_h : r.by_h)
            for (const SweepRecord& rec : per_h) failed += rec.failed;
        if (failed > 0) std::cerr << "stencil-lab: warning: " << failed << " stencil size(s) failed, see manifest\n";
    } catch (const StageError& e) {
        return report_error(e.stage(), e.what());
    } catch (const std::exception& e) {
        return report_error("run", e.what());
    }
    return 0;
}

int cmd_repro(const std::string& preset, const std::string& out, std::uint64_t seed) {
    try {
        const PresetReport report = repro(preset, out, seed);
        for (const CheckResult& c : report.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                      << '\n';
        std::cout << "summary: " << out << '/' << preset << "_summary.json\n";
        return report.all_passed() ? 0 : 1;
    } catch (const StageError& e) {
        return report_error(e.stage(), e.what());
    } catch (const std::exception& e) {
        return report_error("repro", e.what());
    }
}

int cmd_nodes(const std::string& domain, double h, std::uint64_t seed, const std::string& generator,
              const std::string& out, bool with_quality) {
    try {
        ExperimentConfig c;
        c.domain = domain;
        c.h = h;
        c.seed = seed;
        c.generator = generator;
        c.m = 0;
        c.n_min = c.n_max = 1;
        validate(c);
        const NodeSet nodes = generate_nodes(c, h);
        std::ofstream file;
        if (out != "-") {
            file.open(out);
            if (!file) throw Error("cannot write " + out);
        }
        write_nodes_csv(out == "-" ? std::cout : file, nodes);
        std::cerr << nodes.size() << " nodes (" << nodes.interior_count() << " interior)";
        if (with_quality) {
            const Domain d = make_domain(domain);
            const QualityMetrics q = quality(nodes, d, d.dimension() == 3 ? 32 : 128);
            std::cerr << ", rho " << q.rho << ", delta " << q.delta << ", gamma " << q.gamma;
        }
        std::cerr << '\n';
    } catch (const std::exception& e) {
        return report_error("generate", e.what());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stencil-lab: PHS RBF-FD stencil-size experiments"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    std::string config_path, run_out;
    bool dump = false, write_nodes = false;
    int dump_n = 0;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
    run_cmd->add_option("--config", config_path, "INI or JSON config (a run manifest also works)")->required();
    run_cmd->add_option("--out", run_out, "Output directory (overrides output.dir)");
    run_cmd->add_flag("--dump-system", dump, "Write the global matrix and RHS (MatrixMarket) and the weights (CSV)");
    run_cmd->add_option("--dump-n", dump_n, "Stencil size for --dump-system (default: first swept n)");
    run_cmd->add_flag("--write-nodes", write_nodes, "Write the prepared node set as CSV");

    std::string preset, repro_out = "repro_out";
    std::uint64_t seed = 1;
    auto* repro_cmd = app.add_subcommand("repro", "Run a named figure/table recipe and check its thresholds");
    repro_cmd->add_option("preset", preset, "Preset name")->required();
    repro_cmd->add_option("--out", repro_out, "Output directory");
    repro_cmd->add_option("--seed", seed, "Base node-generation seed");
    auto* list_cmd = app.add_subcommand("presets", "List the available presets");

    std::string domain = "disc", nodes_out = "-", generator = "advancing_front";
    double h = 0.01;
    std::uint64_t node_seed = 1;
    bool with_quality = false;
    auto* nodes_cmd = app.add_subcommand("nodes", "Generate a node set and write it as CSV");
    nodes_cmd->set_help_flag("--help", "Print this help message and exit");
    nodes_cmd->add_option("--domain", domain, "Domain name")->check(CLI::IsMember(domain_names()));
    nodes_cmd->add_option("--h", h, "Nominal spacing")->required();
    nodes_cmd->add_option("--seed", node_seed, "Generator seed");
    nodes_cmd->add_option("--generator", generator, "advancing_front, halton or polar");
    nodes_cmd->add_option("--out", nodes_out, "Output CSV path ('-' for stdout)");
    nodes_cmd->add_flag("--quality", with_quality, "Report rho, delta and gamma on stderr");

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return cmd_run(config_path, run_out, dump, dump_n, write_nodes);
    if (*repro_cmd) return cmd_repro(preset, repro_out, seed);
    if (*list_cmd) {
        for (const std::string& p : preset_names()) std::cout << p << '\n';
        return 0;
    }
    if (*nodes_cmd) return cmd_nodes(domain, h, node_seed, generator, nodes_out, with_quality);
    return 0;
}
