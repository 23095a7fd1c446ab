#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stencil_lab/pde.hpp"

namespace stencil_lab {

/// Pointwise and aggregate errors over interior nodes.
///   e_poiss = u_hat - u,  e_lap = (L~ u) - f  (discrete operator applied to exact samples)
/// max/avg are over |e|; dN = (#{e > 0} - #{e < 0}) / N_int, exact zeros count in neither set.
struct ErrorReport {
    std::vector<int> interior_nodes;
    std::vector<double> e_poiss_signed;
    std::vector<double> e_lap_signed;
    double e_poiss_max = 0.0;
    double e_poiss_avg = 0.0;
    double e_lap_max = 0.0;
    double e_lap_avg = 0.0;
    double dN_poiss = 0.0;
    double dN_lap = 0.0;
    std::size_t n_int = 0;
};

struct SignCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
};

SignCounts sign_counts(std::span<const double> e);
/// Average sign of e; 0 for an empty span.
double sign_balance(std::span<const double> e);

ErrorReport error_report(const SolutionField& u_hat, const ScalarField& exact_u, const ScalarField& rhs_f,
                         const DiffWeights& op_weights, const NodeSet& nodes);

struct SweepRecord {
    int n = 0;
    double e_max_poiss = 0.0;
    double e_avg_poiss = 0.0;
    double e_max_lap = 0.0;
    double e_avg_lap = 0.0;
    double dN_poiss = 0.0;
    double dN_lap = 0.0;
    double wall_time_s = 0.0;
    /// Mean IMEX indicator, NaN unless requested.
    double imex_avg = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::string error;
};

struct ImexOptions {
    /// 0 in sweeps means m + 2; imex_indicator needs an explicit degree.
    int m_high = 0;
    /// High-order stencils hold max(n, ceil(inflation * C(m_high + d, d))) nodes.
    double inflation = 1.5;
};

struct SweepOptions {
    RadialKernel kernel = RadialKernel::phs(1);
    int m = 3;
    SolverOptions solver;
    WeightOptions weights;
    std::optional<ImexOptions> imex;
    /// Nodes matching `fixed_region` keep stencil size `n_fixed` for every n.
    std::function<bool(const Vec&)> fixed_region;
    int n_fixed = 0;
};

/// Solves the problem for every n in [n_min, n_max] on one node set. `nodes` must already
/// carry boundary roles and ghosts (see prepare_nodes). `exact_u` may be empty, in which case
/// only the IMEX indicator is reported and the error fields are NaN.
std::vector<SweepRecord> stencil_sweep(const ProblemSpec& problem, const NodeSet& nodes, int n_min, int n_max,
                                       const SweepOptions& options, const ScalarField& exact_u);

struct SweepCase {
    ProblemSpec problem;
    ScalarField exact_u;
};

/// Sweeps several problems that share operator, node roles and boundary layout (only f and the
/// boundary data differ): one matrix and one factorization per n serve every case.
std::vector<std::vector<SweepRecord>> multi_sweep(std::span<const SweepCase> cases, const NodeSet& nodes, int n_min,
                                                  int n_max, const SweepOptions& options);

/// stencil_sweep with nodes inside `region` pinned to n_fixed.
std::vector<SweepRecord> region_sweep(const ProblemSpec& problem, const NodeSet& nodes,
                                      const std::function<bool(const Vec&)>& region, int n_fixed, int n_min,
                                      int n_max, SweepOptions options, const ScalarField& exact_u);

/// Applies boundary rules and adds the ghosts they require.
NodeSet prepare_nodes(const NodeSet& raw, const ProblemSpec& problem);

struct ImexResult {
    std::vector<int> interior_nodes;
    std::vector<double> indicator;  // |L_high u_hat - f| per interior node
    double average = 0.0;
};

/// Applies a higher-order (augmentation m_high) discrete operator to the computed solution.
ImexResult imex_indicator(const ProblemSpec& problem, const NodeSet& nodes, const SpatialIndex& index,
                          const SolutionField& u_hat, const RadialKernel& kernel, int n, const ImexOptions& options,
                          const WeightOptions& weights = {});

struct ConvergenceFit {
    std::vector<double> h_values;
    std::vector<double> e_values;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (log h, log e).
ConvergenceFit fit_convergence(std::span<const double> h, std::span<const double> e);

/// Indices i (0 < i < size-1) where v[i] is strictly below (minima) or above (maxima) both
/// neighbours. NaN entries never qualify.
std::vector<std::size_t> local_extrema(std::span<const double> v, bool minima);
/// Ratio between a strict local minimum and the higher of its nearest strict local maxima (one on
/// each side when present). Returns the minimum with the largest ratio, if any minimum has a
/// neighbouring maximum.
struct MinimumContrast {
    std::size_t index = 0;
    double contrast = 0.0;
};
std::optional<MinimumContrast> best_minimum_contrast(std::span<const double> v);
/// Number of sign changes of the discrete slope v[i+1] - v[i] (zero slopes are skipped).
int slope_sign_changes(std::span<const double> v);

/// CSV with header n,e_max_poiss,e_avg_poiss,e_max_lap,e_avg_lap,dN_poiss,dN_lap,wall_time_s
/// (an imex_avg column is appended when any record carries one).
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

}  // namespace stencil_lab
