#include "stencil_lab/weights.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "stencil_lab/parallel.hpp"

namespace stencil_lab {

LocalSystem assemble_local_system(std::span<const Vec> points, const Vec& center, int dim, const RadialKernel& kernel,
                                  int m, const LinearOperator& op, bool scale_coordinates) {
    const int n = static_cast<int>(points.size());
    const MonomialBasis basis = monomial_basis(m, dim);
    const int nm = static_cast<int>(basis.size());
    if (n < nm)
        throw ConfigError("stencil of " + std::to_string(n) + " nodes cannot support " + std::to_string(nm) +
                          " monomials (degree " + std::to_string(m) + ")");

    double scale = 0.0;
    if (scale_coordinates)
        for (const Vec& p : points) scale = std::max(scale, dist(p, center));
    if (!(scale > 0)) scale = 1.0;

    std::vector<Vec> local(points.size());
    for (int i = 0; i < n; ++i) local[i] = (1.0 / scale) * (points[i] - center);

    LocalSystem sys;
    sys.n = n;
    sys.monomials = nm;
    sys.scale = scale;
    sys.matrix = Eigen::MatrixXd::Zero(n + nm, n + nm);
    sys.rhs = Eigen::VectorXd::Zero(n + nm);

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = kernel_value(kernel, dist(local[i], local[j]));
            sys.matrix(i, j) = v;
            sys.matrix(j, i) = v;
        }
        sys.matrix(i, i) = kernel_value(kernel, 0.0);
        for (int k = 0; k < nm; ++k) {
            const double p = monomial_value(basis.exponents[k], local[i]);
            sys.matrix(i, n + k) = p;
            sys.matrix(n + k, i) = p;
        }
    }

    // Operator terms are applied in scaled coordinates and unscaled by s^-|alpha|.
    const Vec origin{};
    for (const OperatorTerm& t : op.terms) {
        const double c = t.coeff(center) * std::pow(scale, -t.alpha.total());
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i)
            sys.rhs(i) += c * kernel_derivative(kernel, t.alpha, origin - local[i], OriginPolicy::Zero);
        for (int k = 0; k < nm; ++k) sys.rhs(n + k) += c * monomial_derivative(basis.exponents[k], t.alpha, origin);
    }
    return sys;
}

double condition_estimate(const LocalSystem& system) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.matrix);
    const double rc = lu.rcond();
    return rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

std::vector<double> compute_weights(std::span<const Vec> points, const Vec& center, int dim,
                                    const RadialKernel& kernel, int m, const LinearOperator& op,
                                    const WeightOptions& options) {
    const LocalSystem sys = assemble_local_system(points, center, dim, kernel, m, op, options.scale_coordinates);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
    const double rc = lu.rcond();
    const double cond = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond <= options.max_condition)) {
        std::ostringstream msg;
        msg << "local system is singular or ill-conditioned (condition estimate " << cond << ")";
        throw SingularityError(msg.str(), -1, cond);
    }
    const Eigen::VectorXd sol = lu.solve(sys.rhs);
    std::vector<double> w(sol.data(), sol.data() + sys.n);
    for (double v : w)
        if (!std::isfinite(v)) throw SingularityError("non-finite weight", -1, cond);
    return w;
}

double DiffWeights::apply(std::size_t row, std::span<const double> u) const {
    const WeightRow& r = rows[row];
    double s = 0.0;
    for (std::size_t k = 0; k < r.cols.size(); ++k) s += r.values[k] * u[r.cols[k]];
    return s;
}

DiffWeights build_diff_matrix(const NodeSet& nodes, std::span<const Stencil> stencils, const RadialKernel& kernel,
                              int m, const LinearOperator& op, const WeightOptions& options) {
    return build_diff_matrix(
        nodes, stencils, kernel, m, [&op](int) { return op; }, options);
}

DiffWeights build_diff_matrix(const NodeSet& nodes, std::span<const Stencil> stencils, const RadialKernel& kernel,
                              int m, const OperatorForNode& op_for, const WeightOptions& options) {
    DiffWeights out;
    out.rows.resize(stencils.size());
    std::vector<std::string> failures(stencils.size());
    std::vector<double> failure_cond(stencils.size(), 0.0);
    std::vector<int> orders(stencils.size(), 0);

    parallel_for(stencils.size(), [&](std::size_t s) {
        const Stencil& st = stencils[s];
        std::vector<Vec> pts;
        pts.reserve(st.members.size());
        for (int idx : st.members) pts.push_back(nodes.positions[idx]);
        const LinearOperator op = op_for(st.center);
        orders[s] = op.order();
        WeightRow& row = out.rows[s];
        row.node = st.center;
        row.cols = st.members;
        try {
            row.values = compute_weights(pts, nodes.positions[st.center], nodes.dim, kernel, m, op, options);
        } catch (const SingularityError& e) {
            failures[s] = e.what();
            failure_cond[s] = e.condition();
        }
    });

    std::size_t failed = 0;
    std::ostringstream msg;
    std::ptrdiff_t first = -1;
    double first_cond = 0.0;
    for (std::size_t s = 0; s < stencils.size(); ++s) {
        if (failures[s].empty()) continue;
        if (failed < 5) msg << (failed ? "; " : "") << "node " << stencils[s].center << ": " << failures[s];
        if (first < 0) first = stencils[s].center, first_cond = failure_cond[s];
        ++failed;
    }
    if (failed > 0)
        throw SingularityError(std::to_string(failed) + " weight row(s) failed: " + msg.str(), first, first_cond);
    for (int o : orders) out.order = std::max(out.order, o);
    return out;
}

void write_triplets_csv(std::ostream& out, const DiffWeights& weights) {
    out << "row,col,value\n" << std::setprecision(17);
    for (const WeightRow& r : weights.rows)
        for (std::size_t k = 0; k < r.cols.size(); ++k) out << r.node << ',' << r.cols[k] << ',' << r.values[k] << '\n';
}

}  // namespace stencil_lab
