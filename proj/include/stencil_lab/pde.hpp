#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Sparse>

#include "stencil_lab/geometry.hpp"
#include "stencil_lab/weights.hpp"

namespace stencil_lab {

using ScalarField = std::function<double(const Vec&)>;

struct Dirichlet {
    ScalarField g;
};
struct Neumann {
    ScalarField g;
};
/// u + alpha du/dn = g
struct Robin {
    double alpha = 1.0;
    ScalarField g;
};
using BoundaryCondition = std::variant<Dirichlet, Neumann, Robin>;

struct BoundaryRule {
    std::function<bool(const Vec&)> applies;
    BoundaryCondition condition;
};

/// L u = f in the domain; boundary rules are tried in order and the first match wins.
struct ProblemSpec {
    Domain domain;
    LinearOperator op;
    ScalarField rhs;
    std::vector<BoundaryRule> bc;
};

/// Tags every boundary node with the role of its first matching rule. Throws ConfigError for an
/// uncovered node, or for a Neumann/Robin rule landing on a flagged corner.
NodeSet apply_boundary_roles(NodeSet nodes, const ProblemSpec& problem);

/// Adds one ghost at b + h n for each Neumann/Robin node. Ghosts that fall inside the domain are
/// kept; their count is reported through `inside_warnings` when given.
NodeSet add_ghosts(NodeSet nodes, const Domain& domain, std::size_t* inside_warnings = nullptr);

struct GlobalSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<int> unknown_index;  // node -> column (identity ordering)
    /// Operator rows at interior, Neumann and Robin nodes, reused for error analysis.
    DiffWeights operator_weights;
};

/// Rows: interior -> L u = f; Dirichlet -> u = g; Neumann -> du/dn = g at the node and L u = f in
/// the row slot of its ghost; Robin -> u + alpha du/dn = g plus the ghost-slot PDE row.
/// `stencils` must hold one stencil per node returned by needs_stencil().
GlobalSystem assemble(const ProblemSpec& problem, const NodeSet& nodes, std::span<const Stencil> stencils,
                      const RadialKernel& kernel, int m, const WeightOptions& options = {});

/// Right-hand side of the system assemble() builds; only depends on node roles and the problem data,
/// so problems sharing operator and boundary layout can reuse one matrix.
Eigen::VectorXd assemble_rhs(const ProblemSpec& problem, const NodeSet& nodes);

enum class SolverMethod { DirectLU, BiCGSTAB };

struct SolverOptions {
    SolverMethod method = SolverMethod::DirectLU;
    double tol = 1e-10;
    long max_iter = 0;  // 0 -> 10 x system size
    bool diagonal_scaling = false;  // Jacobi preconditioning for BiCGSTAB
};

struct SolutionField {
    std::vector<double> values;
    double residual_norm = 0.0;  // ||A u - b||_2
    std::string solver_used;
    long iterations = 0;
};

SolutionField solve(const GlobalSystem& system, const SolverOptions& options = {});
/// One factorization (or preconditioner setup) shared by several right-hand sides.
std::vector<SolutionField> solve_many(const GlobalSystem& system, std::span<const Eigen::VectorXd> rhs,
                                      const SolverOptions& options = {});

/// MatrixMarket coordinate dump of the matrix, plus the right-hand side as an array file.
void write_matrix_market(const std::string& matrix_path, const std::string& rhs_path, const GlobalSystem& system);

}  // namespace stencil_lab
