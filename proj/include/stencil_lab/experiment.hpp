#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stencil_lab/analysis.hpp"
#include "stencil_lab/problems.hpp"

namespace stencil_lab {

inline constexpr int kCsvSchemaVersion = 1;
std::string library_version();

/// A run failure tagged with the pipeline stage (config, generate, problem, sweep, report).
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

enum class RunMode { Sweep, Convergence };

struct ExperimentConfig {
    std::string name = "run";
    RunMode mode = RunMode::Sweep;

    std::string domain = "disc";
    double h = 0.01;
    std::uint64_t seed = 1;
    std::string generator = "advancing_front";  // advancing_front | halton | polar
    double spacing_factor = AdvancingFrontOptions{}.spacing_factor;
    std::uint64_t halton_skip = 20;
    std::size_t halton_count = 0;  // 0: match the advancing-front interior count
    int probe_density = 0;         // 0: 128 in 1D/2D, 32 in 3D

    std::string kernel = "phs3";
    int m = 3;
    double max_condition = 1e14;

    std::string op = "laplacian";
    std::string solution = "default";
    std::string bc = "dirichlet_all";
    double robin_alpha = 1.0;
    HeatsinkParams heat;

    int n_min = 10;
    int n_max = 69;
    std::vector<double> h_list;  // convergence mode
    std::vector<int> n_list;     // convergence mode

    std::string region;  // "", outside_radius:<r>, inside_radius:<r>
    int n_fixed = 0;

    std::string solver = "direct";  // direct | bicgstab
    double tol = 1e-10;
    bool jacobi = false;

    bool imex = false;
    int m_high = 0;  // 0: m + 2
    double imex_inflation = 1.5;

    std::string output = ".";
};

/// `format` is "ini", "json" or "auto" (JSON when the text starts with '{').
ExperimentConfig parse_config(const std::string& text, const std::string& format = "auto");
/// Reads a config file; a run manifest is accepted too (its "config" object is used).
ExperimentConfig load_config(const std::string& path);
/// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& config);
std::string config_to_json(const ExperimentConfig& config);
std::string config_to_ini(const ExperimentConfig& config);

int domain_dimension(const std::string& domain);
/// Raw node set (all boundary nodes still Dirichlet) for the configured generator.
NodeSet generate_nodes(const ExperimentConfig& config, double h);
ProblemSpec build_problem(const ExperimentConfig& config);
SweepOptions sweep_options(const ExperimentConfig& config);
/// outside_radius:<r> selects |x - c| > r around the domain's bounding-box centre, inside_radius:<r>
/// the complement.
std::function<bool(const Vec&)> region_predicate(const std::string& id, const Domain& domain);

struct RunFlags {
    bool dump_system = false;
    int dump_n = 0;  // 0: n_min (first n of n_list in convergence mode)
    bool write_nodes = false;
};

struct NodeSetSummary {
    double h = 0.0;
    std::size_t total = 0;
    std::size_t interior = 0;
    std::size_t boundary = 0;
    std::size_t ghost = 0;
    QualityMetrics quality;
};

struct RunResult {
    std::vector<SweepRecord> records;  // sweep mode
    std::vector<std::vector<SweepRecord>> by_h;  // convergence mode, aligned with h_list
    std::vector<ConvergenceFit> fits;            // convergence mode, aligned with n_list
    std::vector<NodeSetSummary> node_sets;
    std::vector<std::string> files;
};

/// generate -> problem -> sweep (or convergence) -> report. Writes <output>/<name>.csv (or one CSV per
/// h plus <name>_fit.csv) and <name>.manifest.json.
RunResult run(const ExperimentConfig& config, const RunFlags& flags = {});

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PresetReport {
    std::string preset;
    std::vector<CheckResult> checks;
    std::vector<std::string> files;
    bool all_passed() const;
};

std::vector<std::string> preset_names();
/// Runs a figure/table recipe into out_dir and evaluates its pass/fail checks. Writes
/// <preset>_summary.json next to the CSVs.
PresetReport repro(const std::string& preset, const std::string& out_dir, std::uint64_t seed = 1);

/// True when the curve has a strict local minimum (or maximum) at some n in [lo, hi].
bool has_extremum_in(std::span<const SweepRecord> records, double SweepRecord::*field, bool minima, int lo, int hi);
/// Values of `field` in record order.
std::vector<double> column(std::span<const SweepRecord> records, double SweepRecord::*field);

}  // namespace stencil_lab
