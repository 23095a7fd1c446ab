#include "stencil_lab/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "stencil_lab/parallel.hpp"

namespace stencil_lab {

SignCounts sign_counts(std::span<const double> e) {
    SignCounts c;
    for (double v : e) {
        if (v > 0) ++c.positive;
        else if (v < 0) ++c.negative;
        else ++c.zero;
    }
    return c;
}

double sign_balance(std::span<const double> e) {
    if (e.empty()) return 0.0;
    const SignCounts c = sign_counts(e);
    return (static_cast<double>(c.positive) - static_cast<double>(c.negative)) / static_cast<double>(e.size());
}

namespace {

void aggregate(std::span<const double> e, double& emax, double& eavg) {
    emax = 0.0;
    double sum = 0.0;
    for (double v : e) {
        emax = std::max(emax, std::abs(v));
        sum += std::abs(v);
    }
    eavg = e.empty() ? 0.0 : sum / static_cast<double>(e.size());
}

std::vector<std::ptrdiff_t> row_lookup(const DiffWeights& w, std::size_t node_count) {
    std::vector<std::ptrdiff_t> at(node_count, -1);
    for (std::size_t r = 0; r < w.rows.size(); ++r) at[w.rows[r].node] = static_cast<std::ptrdiff_t>(r);
    return at;
}

std::vector<Stencil> prefixes(std::span<const Stencil> big, const NodeSet& nodes, const std::function<int(int)>& size_of,
                              const std::function<bool(int)>& keep) {
    std::vector<Stencil> out;
    for (const Stencil& s : big)
        if (keep(s.center)) out.push_back(stencil_prefix(s, size_of(s.center), nodes.positions));
    return out;
}

ImexResult imex_from_stencils(const ProblemSpec& problem, const NodeSet& nodes, std::span<const Stencil> stencils,
                              const SolutionField& u_hat, const RadialKernel& kernel, int m_high,
                              const WeightOptions& weights) {
    const DiffWeights high = build_diff_matrix(nodes, stencils, kernel, m_high, problem.op, weights);
    ImexResult out;
    double sum = 0.0;
    for (std::size_t r = 0; r < high.rows.size(); ++r) {
        const int node = high.rows[r].node;
        const double v = std::abs(high.apply(r, u_hat.values) - problem.rhs(nodes.positions[node]));
        out.interior_nodes.push_back(node);
        out.indicator.push_back(v);
        sum += v;
    }
    out.average = out.indicator.empty() ? 0.0 : sum / static_cast<double>(out.indicator.size());
    return out;
}

int imex_min_size(const ImexOptions& o, int dim) {
    if (o.m_high <= 0) throw ConfigError("IMEX degree must be positive");
    return static_cast<int>(std::ceil(o.inflation * static_cast<double>(monomial_count(o.m_high, dim)) - 1e-12));
}

}  // namespace

ErrorReport error_report(const SolutionField& u_hat, const ScalarField& exact_u, const ScalarField& rhs_f,
                         const DiffWeights& op_weights, const NodeSet& nodes) {
    if (u_hat.values.size() != nodes.size()) throw InputError("solution size does not match the node set");
    const auto at = row_lookup(op_weights, nodes.size());
    std::vector<double> exact(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) exact[i] = exact_u(nodes.positions[i]);

    ErrorReport rep;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.roles[i] != NodeRole::Interior) continue;
        if (at[i] < 0) throw InputError("no operator weights at interior node " + std::to_string(i));
        rep.interior_nodes.push_back(static_cast<int>(i));
        rep.e_poiss_signed.push_back(u_hat.values[i] - exact[i]);
        rep.e_lap_signed.push_back(op_weights.apply(static_cast<std::size_t>(at[i]), exact) -
                                   rhs_f(nodes.positions[i]));
    }
    rep.n_int = rep.interior_nodes.size();
    aggregate(rep.e_poiss_signed, rep.e_poiss_max, rep.e_poiss_avg);
    aggregate(rep.e_lap_signed, rep.e_lap_max, rep.e_lap_avg);
    rep.dN_poiss = sign_balance(rep.e_poiss_signed);
    rep.dN_lap = sign_balance(rep.e_lap_signed);
    return rep;
}

NodeSet prepare_nodes(const NodeSet& raw, const ProblemSpec& problem) {
    return add_ghosts(apply_boundary_roles(raw, problem), problem.domain);
}

std::vector<std::vector<SweepRecord>> multi_sweep(std::span<const SweepCase> cases, const NodeSet& nodes, int n_min,
                                                  int n_max, const SweepOptions& options) {
    if (cases.empty()) throw ConfigError("sweep needs at least one problem");
    const ProblemSpec& lead = cases.front().problem;
    const int dim = nodes.dim;
    const int n_poly = static_cast<int>(monomial_count(options.m, dim));
    if (n_min > n_max) throw ConfigError("empty stencil-size range");
    if (n_min < n_poly)
        throw ConfigError("smallest stencil size " + std::to_string(n_min) + " is below the " +
                          std::to_string(n_poly) + " monomials of degree " + std::to_string(options.m));
    if (options.fixed_region && options.n_fixed < n_poly) throw ConfigError("fixed stencil size too small");
    int cap = std::max(n_max, options.fixed_region ? options.n_fixed : 0);
    int high_min = 0;
    std::optional<ImexOptions> imex = options.imex;
    if (imex) {
        if (imex->m_high == 0) imex->m_high = options.m + 2;
        if (imex->m_high <= options.m) throw ConfigError("IMEX degree must exceed the solve degree");
        high_min = imex_min_size(*imex, dim);
        cap = std::max(cap, high_min);
    }
    if (static_cast<std::size_t>(cap) > nodes.size())
        throw ConfigError("stencil size " + std::to_string(cap) + " exceeds the " + std::to_string(nodes.size()) +
                          " available nodes");

    const SpatialIndex index = build_index(nodes);
    std::vector<int> rows;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (needs_stencil(nodes.roles[i])) rows.push_back(static_cast<int>(i));
    std::vector<Stencil> big(rows.size());
    parallel_for(rows.size(), [&](std::size_t k) { big[k] = stencil_of(index, rows[k], cap); });

    std::vector<char> pinned(nodes.size(), 0);
    if (options.fixed_region)
        for (std::size_t i = 0; i < nodes.size(); ++i) pinned[i] = options.fixed_region(nodes.positions[i]) ? 1 : 0;

    std::vector<Eigen::VectorXd> rhs;
    for (const SweepCase& c : cases) rhs.push_back(assemble_rhs(c.problem, nodes));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<SweepRecord>> records(cases.size());
    for (int n = n_min; n <= n_max; ++n) {
        std::vector<SweepRecord> recs(cases.size());
        for (SweepRecord& r : recs) r.n = n;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto size_of = [&](int node) { return pinned[node] ? options.n_fixed : n; };
            const auto stencils = prefixes(big, nodes, size_of, [](int) { return true; });
            const GlobalSystem sys = assemble(lead, nodes, stencils, options.kernel, options.m, options.weights);
            const std::vector<SolutionField> sols = solve_many(sys, rhs, options.solver);
            std::vector<Stencil> high;
            if (imex)
                high = prefixes(
                    big, nodes, [&](int node) { return std::max(size_of(node), high_min); },
                    [&](int node) { return nodes.roles[node] == NodeRole::Interior; });
            for (std::size_t c = 0; c < cases.size(); ++c) {
                SweepRecord& rec = recs[c];
                if (cases[c].exact_u) {
                    const ErrorReport rep =
                        error_report(sols[c], cases[c].exact_u, cases[c].problem.rhs, sys.operator_weights, nodes);
                    rec.e_max_poiss = rep.e_poiss_max;
                    rec.e_avg_poiss = rep.e_poiss_avg;
                    rec.e_max_lap = rep.e_lap_max;
                    rec.e_avg_lap = rep.e_lap_avg;
                    rec.dN_poiss = rep.dN_poiss;
                    rec.dN_lap = rep.dN_lap;
                } else {
                    rec.e_max_poiss = rec.e_avg_poiss = rec.e_max_lap = rec.e_avg_lap = rec.dN_poiss = rec.dN_lap =
                        nan;
                }
                if (imex)
                    rec.imex_avg = imex_from_stencils(cases[c].problem, nodes, high, sols[c], options.kernel,
                                                      imex->m_high, options.weights)
                                       .average;
            }
        } catch (const Error& e) {
            for (SweepRecord& rec : recs) {
                rec.failed = true;
                rec.error = e.what();
            }
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (std::size_t c = 0; c < cases.size(); ++c) {
            recs[c].wall_time_s = elapsed;
            records[c].push_back(recs[c]);
        }
    }
    return records;
}

std::vector<SweepRecord> stencil_sweep(const ProblemSpec& problem, const NodeSet& nodes, int n_min, int n_max,
                                       const SweepOptions& options, const ScalarField& exact_u) {
    const SweepCase single{problem, exact_u};
    return multi_sweep(std::span<const SweepCase>(&single, 1), nodes, n_min, n_max, options).front();
}

std::vector<SweepRecord> region_sweep(const ProblemSpec& problem, const NodeSet& nodes,
                                      const std::function<bool(const Vec&)>& region, int n_fixed, int n_min,
                                      int n_max, SweepOptions options, const ScalarField& exact_u) {
    options.fixed_region = region;
    options.n_fixed = n_fixed;
    return stencil_sweep(problem, nodes, n_min, n_max, options, exact_u);
}

ImexResult imex_indicator(const ProblemSpec& problem, const NodeSet& nodes, const SpatialIndex& index,
                          const SolutionField& u_hat, const RadialKernel& kernel, int n, const ImexOptions& options,
                          const WeightOptions& weights) {
    const int size = std::max(n, imex_min_size(options, nodes.dim));
    if (static_cast<std::size_t>(size) > nodes.size())
        throw ConfigError("not enough nodes for IMEX stencils of size " + std::to_string(size));
    std::vector<Stencil> stencils;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes.roles[i] == NodeRole::Interior) stencils.push_back(stencil_of(index, static_cast<int>(i), size));
    return imex_from_stencils(problem, nodes, stencils, u_hat, kernel, options.m_high, weights);
}

ConvergenceFit fit_convergence(std::span<const double> h, std::span<const double> e) {
    if (h.size() != e.size()) throw InputError("h and e lists differ in length");
    if (h.size() < 3) throw InputError("a convergence fit needs at least three points");
    ConvergenceFit fit;
    fit.h_values.assign(h.begin(), h.end());
    fit.e_values.assign(e.begin(), e.end());
    std::vector<double> x, y;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0 && e[i] > 0)) throw InputError("convergence data must be strictly positive");
        x.push_back(std::log(h[i]));
        y.push_back(std::log(e[i]));
    }
    const double nx = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nx;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / nx;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw InputError("convergence fit needs distinct h values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<std::size_t> local_extrema(std::span<const double> v, bool minima) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double a = v[i - 1], b = v[i], c = v[i + 1];
        if (std::isnan(a) || std::isnan(b) || std::isnan(c)) continue;
        if (minima ? (b < a && b < c) : (b > a && b > c)) out.push_back(i);
    }
    return out;
}

std::optional<MinimumContrast> best_minimum_contrast(std::span<const double> v) {
    const auto minima = local_extrema(v, true);
    const auto maxima = local_extrema(v, false);
    std::optional<MinimumContrast> best;
    for (std::size_t i : minima) {
        double peak = -1.0;
        const auto right = std::upper_bound(maxima.begin(), maxima.end(), i);
        if (right != maxima.end()) peak = std::max(peak, v[*right]);
        if (right != maxima.begin()) peak = std::max(peak, v[*std::prev(right)]);
        if (peak < 0 || !(v[i] > 0)) continue;
        const double c = peak / v[i];
        if (!best || c > best->contrast) best = MinimumContrast{i, c};
    }
    return best;
}

int slope_sign_changes(std::span<const double> v) {
    int changes = 0, last = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0 || std::isnan(d)) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
    const bool imex = std::any_of(records.begin(), records.end(), [](const SweepRecord& r) { return !std::isnan(r.imex_avg); });
    out << "n,e_max_poiss,e_avg_poiss,e_max_lap,e_avg_lap,dN_poiss,dN_lap,wall_time_s";
    if (imex) out << ",imex_avg";
    out << '\n' << std::setprecision(10);
    for (const SweepRecord& r : records) {
        out << r.n << ',' << r.e_max_poiss << ',' << r.e_avg_poiss << ',' << r.e_max_lap << ',' << r.e_avg_lap << ','
            << r.dN_poiss << ',' << r.dN_lap << ',' << r.wall_time_s;
        if (imex) out << ',' << r.imex_avg;
        out << '\n';
    }
}

}  // namespace stencil_lab
