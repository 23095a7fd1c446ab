#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stencil_lab/pde.hpp"

namespace stencil_lab {

/// Analytic test solution with hand-coded derivatives up to second order.
struct SolutionEntry {
    std::string id;
    int dim = 2;
    std::function<double(const MultiIndex&, const Vec&)> derivative;

    double value(const Vec& x) const { return derivative(MultiIndex{}, x); }
    ScalarField u() const;
    /// Closed-form right-hand side L u.
    ScalarField f_for(const LinearOperator& op) const;
    /// grad u . n with n supplied per point.
    double normal_derivative(const Vec& x, const Vec& n) const;
};

/// sin (sin(pi x) in 1D, sin(pi x) sin(pi y) in 2D, the triple product in 3D) and u1..u6.
std::vector<SolutionEntry> solution_registry();
/// "default" resolves to sin; dimension-specific entries are matched on dim.
SolutionEntry find_solution(const std::string& id, int dim);

struct FdCheck {
    bool ok = true;
    double worst = 0.0;  // largest |fd - exact| / max(1, |u|, |exact|)
    std::string detail;
};

/// Compares L u against central differences (step 1e-5) at `points` quasi-random points of
/// [0.1, 0.9]^d for every registry operator valid in the entry's dimension.
FdCheck validate_solution(const SolutionEntry& entry, int points = 100, double step = 1e-5, double tol = 1e-5);

/// Boundary layouts used by the experiments.
enum class BcLayout {
    DirichletAll,
    MixedXGtHalf,  // Dirichlet where x > 0.5, Neumann elsewhere
    RobinAll,      // u + alpha du/dn = g with g from the exact solution
    HeatsinkLite,  // Dirichlet T_hot below the centre (last axis), Robin to T_out elsewhere, f = 0
};

BcLayout parse_bc_layout(const std::string& name);
std::string bc_layout_name(BcLayout layout);

struct HeatsinkParams {
    double t_hot = 80.0;
    double t_out = 20.0;
    double conductivity = 209.0;       // W / (m K)
    double transfer_coefficient = 100.0;  // W / (m^2 K)
    double alpha() const { return conductivity / transfer_coefficient; }
};

/// Builds L u = f with boundary data sampled from `solution` (ignored for HeatsinkLite).
ProblemSpec make_problem(const Domain& domain, const LinearOperator& op, const SolutionEntry& solution,
                         BcLayout layout, double robin_alpha = 1.0, const HeatsinkParams& heat = {});

}  // namespace stencil_lab
