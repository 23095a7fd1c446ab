#include "stencil_lab/pde.hpp"

#include <unordered_map>

#include <unsupported/Eigen/SparseExtra>

namespace stencil_lab {

namespace {

const BoundaryRule* match_rule(const ProblemSpec& problem, const Vec& x) {
    for (const BoundaryRule& r : problem.bc)
        if (r.applies(x)) return &r;
    return nullptr;
}

}  // namespace

NodeSet apply_boundary_roles(NodeSet nodes, const ProblemSpec& problem) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!is_boundary(nodes.roles[i])) continue;
        const BoundaryRule* rule = match_rule(problem, nodes.positions[i]);
        if (rule == nullptr) throw ConfigError("boundary node " + std::to_string(i) + " is not covered by any rule");
        NodeRole role = NodeRole::DirichletBoundary;
        if (std::holds_alternative<Neumann>(rule->condition)) role = NodeRole::NeumannBoundary;
        if (std::holds_alternative<Robin>(rule->condition)) role = NodeRole::RobinBoundary;
        if (role != NodeRole::DirichletBoundary && nodes.corners[i])
            throw ConfigError("corner node " + std::to_string(i) + " only admits a Dirichlet condition");
        nodes.roles[i] = role;
    }
    return nodes;
}

NodeSet add_ghosts(NodeSet nodes, const Domain& domain, std::size_t* inside_warnings) {
    std::size_t inside = 0;
    const std::size_t original = nodes.size();
    for (std::size_t i = 0; i < original; ++i) {
        const NodeRole r = nodes.roles[i];
        if (r != NodeRole::NeumannBoundary && r != NodeRole::RobinBoundary) continue;
        if (nodes.ghost_link[i] >= 0) continue;
        const Vec ghost = nodes.positions[i] + nodes.h * nodes.normals[i];
        if (contains(domain, ghost)) ++inside;
        nodes.push(ghost, NodeRole::Ghost, nodes.normals[i]);
        nodes.ghost_link.back() = static_cast<int>(i);
        nodes.ghost_link[i] = static_cast<int>(nodes.size() - 1);
    }
    if (inside_warnings != nullptr) *inside_warnings = inside;
    return nodes;
}

namespace {

// Interior nodes own their PDE row; Neumann/Robin nodes place it in their ghost's slot.
std::size_t pde_row(const NodeSet& nodes, int node) {
    return nodes.roles[node] == NodeRole::Interior ? static_cast<std::size_t>(node)
                                                   : static_cast<std::size_t>(nodes.ghost_link[node]);
}

}  // namespace

Eigen::VectorXd assemble_rhs(const ProblemSpec& problem, const NodeSet& nodes) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeRole r = nodes.roles[i];
        const Vec& x = nodes.positions[i];
        if (r == NodeRole::Ghost) continue;
        if (needs_stencil(r)) rhs(static_cast<Eigen::Index>(pde_row(nodes, static_cast<int>(i)))) = problem.rhs(x);
        if (r == NodeRole::Interior) continue;
        const BoundaryRule* rule = match_rule(problem, x);
        if (rule == nullptr) throw ConfigError("boundary node " + std::to_string(i) + " is not covered by any rule");
        const auto idx = static_cast<Eigen::Index>(i);
        if (r == NodeRole::DirichletBoundary) {
            const auto* d = std::get_if<Dirichlet>(&rule->condition);
            if (d == nullptr) throw ConfigError("Dirichlet node " + std::to_string(i) + " has no Dirichlet rule");
            rhs(idx) = d->g(x);
        } else if (const auto* nm = std::get_if<Neumann>(&rule->condition)) {
            rhs(idx) = nm->g(x);
        } else if (const auto* rb = std::get_if<Robin>(&rule->condition)) {
            rhs(idx) = rb->g(x);
        } else {
            throw ConfigError("node role and boundary rule disagree at node " + std::to_string(i));
        }
    }
    return rhs;
}

GlobalSystem assemble(const ProblemSpec& problem, const NodeSet& nodes, std::span<const Stencil> stencils,
                      const RadialKernel& kernel, int m, const WeightOptions& options) {
    const std::size_t n = nodes.size();
    std::unordered_map<int, std::size_t> stencil_at;
    for (std::size_t s = 0; s < stencils.size(); ++s) stencil_at[stencils[s].center] = s;
    for (std::size_t i = 0; i < n; ++i) {
        if (needs_stencil(nodes.roles[i]) && !stencil_at.count(static_cast<int>(i)))
            throw ConfigError("node " + std::to_string(i) + " has no stencil");
        if ((nodes.roles[i] == NodeRole::NeumannBoundary || nodes.roles[i] == NodeRole::RobinBoundary) &&
            nodes.ghost_link[i] < 0)
            throw ConfigError("boundary node " + std::to_string(i) + " needs a ghost node");
    }

    GlobalSystem sys;
    sys.operator_weights = build_diff_matrix(nodes, stencils, kernel, m, problem.op, options);

    // Boundary-condition rows at Neumann/Robin nodes.
    std::vector<Stencil> flux_stencils;
    std::vector<double> robin_alpha;
    for (const Stencil& st : stencils) {
        const NodeRole r = nodes.roles[st.center];
        if (r != NodeRole::NeumannBoundary && r != NodeRole::RobinBoundary) continue;
        const BoundaryRule* rule = match_rule(problem, nodes.positions[st.center]);
        if (rule == nullptr) throw ConfigError("boundary node " + std::to_string(st.center) + " lost its rule");
        flux_stencils.push_back(st);
        if (std::holds_alternative<Neumann>(rule->condition)) {
            robin_alpha.push_back(std::numeric_limits<double>::quiet_NaN());
        } else if (const auto* rb = std::get_if<Robin>(&rule->condition)) {
            robin_alpha.push_back(rb->alpha);
        } else {
            throw ConfigError("node role and boundary rule disagree at node " + std::to_string(st.center));
        }
    }
    std::unordered_map<int, std::size_t> flux_index;
    for (std::size_t k = 0; k < flux_stencils.size(); ++k) flux_index[flux_stencils[k].center] = k;
    const int dim = nodes.dim;
    const DiffWeights flux = build_diff_matrix(
        nodes, flux_stencils, kernel, m,
        [&](int node) {
            const LinearOperator dn = normal_derivative(nodes.normals[node], dim);
            const double alpha = robin_alpha[flux_index.at(node)];
            if (std::isnan(alpha)) return dn;
            return combine(identity_operator(dim), dn, alpha);
        },
        options);

    std::vector<Eigen::Triplet<double>> triplets;
    sys.unknown_index.resize(n);
    std::vector<char> row_filled(n, 0);
    auto put_row = [&](std::size_t row, const WeightRow& w) {
        for (std::size_t k = 0; k < w.cols.size(); ++k)
            triplets.emplace_back(static_cast<int>(row), w.cols[k], w.values[k]);
        row_filled[row] = 1;
    };

    for (std::size_t s = 0; s < stencils.size(); ++s) {
        const WeightRow& w = sys.operator_weights.rows[s];
        put_row(pde_row(nodes, w.node), w);
    }
    for (const WeightRow& w : flux.rows) put_row(static_cast<std::size_t>(w.node), w);
    for (std::size_t i = 0; i < n; ++i) {
        sys.unknown_index[i] = static_cast<int>(i);
        if (nodes.roles[i] != NodeRole::DirichletBoundary) continue;
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
        row_filled[i] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!row_filled[i]) throw std::logic_error("global system row " + std::to_string(i) + " left empty");
    sys.rhs = assemble_rhs(problem, nodes);

    sys.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

namespace {

template <class Solver>
std::vector<SolutionField> iterate(Solver& it, const GlobalSystem& system, std::span<const Eigen::VectorXd> rhs,
                                   const SolverOptions& options, const std::string& tag) {
    const auto& A = system.matrix;
    const long max_iter = options.max_iter > 0 ? options.max_iter : 10 * static_cast<long>(A.rows());
    it.setTolerance(options.tol);
    it.setMaxIterations(max_iter);
    it.compute(A);
    std::vector<SolutionField> out;
    for (const Eigen::VectorXd& b : rhs) {
        const Eigen::VectorXd x = it.solve(b);
        const double rel = it.error();
        const long iters = it.iterations();
        if (!(rel <= options.tol) || !x.allFinite())
            throw SolverError("BiCGSTAB did not converge (relative residual " + std::to_string(rel) + " after " +
                                  std::to_string(iters) + " iterations)",
                              iters, rel);
        SolutionField f;
        f.iterations = iters;
        f.solver_used = tag;
        f.residual_norm = (A * x - b).norm();
        f.values.assign(x.data(), x.data() + x.size());
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

std::vector<SolutionField> solve_many(const GlobalSystem& system, std::span<const Eigen::VectorXd> rhs,
                                      const SolverOptions& options) {
    const auto& A = system.matrix;
    if (A.rows() != A.cols()) throw InputError("global system must be square");
    for (const Eigen::VectorXd& b : rhs)
        if (b.size() != A.rows()) throw InputError("right-hand side length does not match the system");
    if (options.method == SolverMethod::BiCGSTAB) {
        if (options.diagonal_scaling) {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> it;
            return iterate(it, system, rhs, options, "bicgstab_jacobi");
        }
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IdentityPreconditioner> it;
        return iterate(it, system, rhs, options, "bicgstab");
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage(), 0, 0);
    std::vector<SolutionField> out;
    for (const Eigen::VectorXd& b : rhs) {
        Eigen::VectorXd x = lu.solve(b);
        if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse LU solve failed", 0, 0);
        x += lu.solve(b - A * x);  // one step of iterative refinement
        SolutionField f;
        f.solver_used = "direct_lu";
        f.residual_norm = (A * x - b).norm();
        f.values.assign(x.data(), x.data() + x.size());
        out.push_back(std::move(f));
    }
    return out;
}

SolutionField solve(const GlobalSystem& system, const SolverOptions& options) {
    return solve_many(system, std::span<const Eigen::VectorXd>(&system.rhs, 1), options).front();
}

void write_matrix_market(const std::string& matrix_path, const std::string& rhs_path, const GlobalSystem& system) {
    if (!Eigen::saveMarket(system.matrix, matrix_path)) throw Error("cannot write " + matrix_path);
    if (!Eigen::saveMarketVector(system.rhs, rhs_path)) throw Error("cannot write " + rhs_path);
}

}  // namespace stencil_lab
