#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stencil_lab/basis.hpp"
#include "stencil_lab/neighbors.hpp"
#include "stencil_lab/nodegen.hpp"

namespace stencil_lab {

/// Augmented RBF-FD system [[A, P], [P^T, 0]] w = [l_phi; l_p] for one stencil.
struct LocalSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    double scale = 1.0;  // coordinates were divided by this (the stencil radius)
    int n = 0;
    int monomials = 0;
};

struct WeightOptions {
    /// Local systems whose 1-norm condition estimate exceeds this raise SingularityError.
    double max_condition = 1e14;
    /// Divide local coordinates by the stencil radius. Only disabled for conditioning studies.
    bool scale_coordinates = true;
};

LocalSystem assemble_local_system(std::span<const Vec> points, const Vec& center, int dim, const RadialKernel& kernel,
                                  int m, const LinearOperator& op, bool scale_coordinates = true);

/// Reciprocal of LAPACK-style 1-norm rcond estimate; infinity for exactly singular systems.
double condition_estimate(const LocalSystem& system);

/// Weights w with sum_i w_i u(x_i) ~ (L u)(center). Operator coefficients are evaluated at the
/// physical centre. Throws ConfigError if n < C(m + d, d).
std::vector<double> compute_weights(std::span<const Vec> points, const Vec& center, int dim,
                                    const RadialKernel& kernel, int m, const LinearOperator& op,
                                    const WeightOptions& options = {});

struct WeightRow {
    int node = 0;
    std::vector<int> cols;
    std::vector<double> values;
};

/// One weight row per stencil, in stencil order.
struct DiffWeights {
    int order = 0;
    std::vector<WeightRow> rows;

    double apply(std::size_t row, std::span<const double> u) const;
};

using OperatorForNode = std::function<LinearOperator(int node)>;

/// Rows are computed independently (in parallel where workers are available) and written back
/// in stencil order. Per-node failures are collected and reported together.
DiffWeights build_diff_matrix(const NodeSet& nodes, std::span<const Stencil> stencils, const RadialKernel& kernel,
                              int m, const LinearOperator& op, const WeightOptions& options = {});
DiffWeights build_diff_matrix(const NodeSet& nodes, std::span<const Stencil> stencils, const RadialKernel& kernel,
                              int m, const OperatorForNode& op_for, const WeightOptions& options = {});

/// Debug dump: header row,col,value.
void write_triplets_csv(std::ostream& out, const DiffWeights& weights);

}  // namespace stencil_lab
