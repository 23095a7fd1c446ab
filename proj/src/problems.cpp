#include "stencil_lab/problems.hpp"

#include <cmath>
#include <sstream>

#include "stencil_lab/nodegen.hpp"

namespace stencil_lab {

namespace {

// k-th derivative of sin(w t) or cos(w t).
double trig_derivative(bool is_sin, double w, int k, double t) {
    // d/dt sin = w cos, d/dt cos = -w sin
    int phase = (is_sin ? 0 : 1) + k;  // 0 sin, 1 cos, 2 -sin, 3 -cos
    const double s = w * t;
    double v = 0.0;
    switch (phase % 4) {
        case 0: v = std::sin(s); break;
        case 1: v = std::cos(s); break;
        case 2: v = -std::sin(s); break;
        default: v = -std::cos(s); break;
    }
    return std::pow(w, k) * v;
}

SolutionEntry trig_product(const std::string& id, int dim, bool is_sin) {
    SolutionEntry e;
    e.id = id;
    e.dim = dim;
    e.derivative = [dim, is_sin](const MultiIndex& a, const Vec& x) {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= trig_derivative(is_sin, kPi, a[d], x[d]);
        for (int d = dim; d < 3; ++d)
            if (a[d] != 0) return 0.0;
        return v;
    };
    return e;
}

// One term a exp(q) of Franke's function, q = -px (9x - x0)^2 - py (9y - y0)^2 - ly (9y + 1).
struct FrankeTerm {
    double a, px, x0, py, y0, ly;
};

constexpr FrankeTerm kFranke[] = {
    {0.75, 0.25, 2.0, 0.25, 2.0, 0.0},
    {0.75, 1.0 / 49.0, -1.0, 0.0, 0.0, 0.1},
    {0.5, 0.25, 7.0, 0.25, 3.0, 0.0},
    {-0.2, 1.0, 4.0, 1.0, 7.0, 0.0},
};

double franke_derivative(const MultiIndex& a, const Vec& x) {
    if (a[2] != 0) return 0.0;
    double sum = 0.0;
    for (const FrankeTerm& t : kFranke) {
        const double dx = 9 * x[0] - t.x0;
        const double dy = 9 * x[1] - t.y0;
        const double q = -t.px * dx * dx - t.py * dy * dy - t.ly * (9 * x[1] + 1);
        const double qx = -18 * t.px * dx;
        const double qy = -18 * t.py * dy - 9 * t.ly;
        const double qxx = -162 * t.px;
        const double qyy = -162 * t.py;
        const double e = t.a * std::exp(q);
        double fx = 1.0, fy = 1.0;
        // Derivatives of exp(q) with q separable in x and y: D^a exp(q) = exp(q) Px Py.
        switch (a[0]) {
            case 0: fx = 1.0; break;
            case 1: fx = qx; break;
            case 2: fx = qx * qx + qxx; break;
            default: throw InputError("derivative order above 2");
        }
        switch (a[1]) {
            case 0: fy = 1.0; break;
            case 1: fy = qy; break;
            case 2: fy = qy * qy + qyy; break;
            default: throw InputError("derivative order above 2");
        }
        sum += e * fx * fy;
    }
    return sum;
}

double asinh_derivative(int k, double s) {
    const double q = 1.0 + s * s;
    switch (k) {
        case 0: return std::asinh(s);
        case 1: return 1.0 / std::sqrt(q);
        case 2: return -s / (q * std::sqrt(q));
        default: throw InputError("derivative order above 2");
    }
}

std::vector<SolutionEntry> build_registry() {
    std::vector<SolutionEntry> r;
    r.push_back(trig_product("sin", 1, true));
    r.push_back(trig_product("sin", 2, true));
    r.push_back(trig_product("sin", 3, true));

    SolutionEntry u1;
    u1.id = "u1";
    u1.derivative = [](const MultiIndex& a, const Vec& x) {
        return monomial_derivative(MultiIndex{{4, 5, 0}}, a, x);
    };
    r.push_back(u1);

    SolutionEntry u2;
    u2.id = "u2";
    u2.derivative = [](const MultiIndex& a, const Vec& x) {
        if (a[2] != 0 || (a[0] > 0 && a[1] > 0)) return 0.0;
        if (a[0] > 0) return trig_derivative(true, 4.0, a[0], x[0]) + trig_derivative(false, 3.0, a[0], x[0]);
        if (a[1] > 0) return trig_derivative(true, 2.0, a[1], x[1]);
        return 1.0 + std::sin(4 * x[0]) + std::cos(3 * x[0]) + std::sin(2 * x[1]);
    };
    r.push_back(u2);

    SolutionEntry u3;
    u3.id = "u3";
    u3.derivative = [](const MultiIndex& a, const Vec& x) {
        if (a[1] != 0 || a[2] != 0) return 0.0;
        const double e = std::exp(x[0] * x[0]);
        switch (a[0]) {
            case 0: return e;
            case 1: return 2 * x[0] * e;
            case 2: return (2 + 4 * x[0] * x[0]) * e;
            default: throw InputError("derivative order above 2");
        }
    };
    r.push_back(u3);

    SolutionEntry u4;
    u4.id = "u4";
    u4.derivative = [](const MultiIndex& a, const Vec& x) {
        if (a[2] != 0) return 0.0;
        return asinh_derivative(a[0] + a[1], x[0] + 2 * x[1]) * std::pow(2.0, a[1]);
    };
    r.push_back(u4);

    SolutionEntry u5 = trig_product("u5", 2, false);
    r.push_back(u5);

    SolutionEntry u6;
    u6.id = "u6";
    u6.derivative = franke_derivative;
    r.push_back(u6);
    return r;
}

// Central-difference estimate of D^alpha u, |alpha| <= 2.
double fd_derivative(const SolutionEntry& e, const MultiIndex& a, const Vec& x, double h) {
    auto u = [&](const Vec& p) { return e.value(p); };
    auto shift = [&](int d, double s) {
        Vec p = x;
        p[d] += s;
        return p;
    };
    std::vector<int> axes;
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < a[d]; ++k) axes.push_back(d);
    if (axes.empty()) return u(x);
    if (axes.size() == 1) return (u(shift(axes[0], h)) - u(shift(axes[0], -h))) / (2 * h);
    if (axes.size() == 2 && axes[0] == axes[1]) {
        const int d = axes[0];
        return (u(shift(d, h)) - 2 * u(x) + u(shift(d, -h))) / (h * h);
    }
    if (axes.size() == 2) {
        const int d0 = axes[0], d1 = axes[1];
        auto uu = [&](double s0, double s1) {
            Vec p = x;
            p[d0] += s0;
            p[d1] += s1;
            return u(p);
        };
        return (uu(h, h) - uu(h, -h) - uu(-h, h) + uu(-h, -h)) / (4 * h * h);
    }
    throw InputError("derivative order above 2");
}

}  // namespace

ScalarField SolutionEntry::u() const {
    auto d = derivative;
    return [d](const Vec& x) { return d(MultiIndex{}, x); };
}

ScalarField SolutionEntry::f_for(const LinearOperator& op) const {
    if (op.dim != dim)
        throw ConfigError("operator '" + op.name + "' is " + std::to_string(op.dim) + "D but solution '" + id +
                          "' is " + std::to_string(dim) + "D");
    auto d = derivative;
    return [d, op](const Vec& x) { return op.apply(d, x); };
}

double SolutionEntry::normal_derivative(const Vec& x, const Vec& n) const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        MultiIndex a;
        a.orders[k] = 1;
        s += n[k] * derivative(a, x);
    }
    return s;
}

std::vector<SolutionEntry> solution_registry() {
    static const std::vector<SolutionEntry> registry = [] {
        std::vector<SolutionEntry> r = build_registry();
        for (const SolutionEntry& e : r) {
            const FdCheck c = validate_solution(e);
            if (!c.ok) throw Error("solution '" + e.id + "' failed finite-difference validation: " + c.detail);
        }
        return r;
    }();
    return registry;
}

SolutionEntry find_solution(const std::string& id, int dim) {
    const std::string key = id == "default" ? "sin" : id;
    std::string known;
    for (const SolutionEntry& e : solution_registry()) {
        if (e.id == key && e.dim == dim) return e;
        if (known.find(e.id) == std::string::npos) known += (known.empty() ? "" : ", ") + e.id;
    }
    throw ConfigError("unknown solution '" + id + "' in " + std::to_string(dim) + "D (known: default, " + known + ")");
}

FdCheck validate_solution(const SolutionEntry& entry, int points, double step, double tol) {
    FdCheck out;
    std::vector<LinearOperator> ops;
    for (const std::string& name : operator_names()) {
        try {
            ops.push_back(operator_registry(name, entry.dim));
        } catch (const ConfigError&) {
            // operator not defined in this dimension
        }
    }
    for (int i = 1; i <= points; ++i) {
        Vec x = halton_point(static_cast<std::uint64_t>(i) + 20, entry.dim);
        for (int d = 0; d < entry.dim; ++d) x[d] = 0.1 + 0.8 * x[d];
        const double ux = std::abs(entry.value(x));
        for (const LinearOperator& op : ops) {
            const double exact = op.apply(entry.derivative, x);
            const double fd =
                op.apply([&](const MultiIndex& a, const Vec& p) { return fd_derivative(entry, a, p, step); }, x);
            const double err = std::abs(fd - exact) / std::max({1.0, ux, std::abs(exact)});
            if (err > out.worst) out.worst = err;
            if (err > tol && out.ok) {
                out.ok = false;
                std::ostringstream msg;
                msg << "operator " << op.name << " at (" << x[0] << ", " << x[1] << ", " << x[2] << "): exact " << exact
                    << ", finite difference " << fd;
                out.detail = msg.str();
            }
        }
    }
    return out;
}

BcLayout parse_bc_layout(const std::string& name) {
    if (name == "dirichlet_all") return BcLayout::DirichletAll;
    if (name == "mixed_x_gt_half") return BcLayout::MixedXGtHalf;
    if (name == "robin") return BcLayout::RobinAll;
    if (name == "heatsink_lite") return BcLayout::HeatsinkLite;
    throw ConfigError("unknown boundary layout '" + name +
                      "' (known: dirichlet_all, mixed_x_gt_half, robin, heatsink_lite)");
}

std::string bc_layout_name(BcLayout layout) {
    switch (layout) {
        case BcLayout::DirichletAll: return "dirichlet_all";
        case BcLayout::MixedXGtHalf: return "mixed_x_gt_half";
        case BcLayout::RobinAll: return "robin";
        case BcLayout::HeatsinkLite: return "heatsink_lite";
    }
    return "?";
}

ProblemSpec make_problem(const Domain& domain, const LinearOperator& op, const SolutionEntry& solution,
                         BcLayout layout, double robin_alpha, const HeatsinkParams& heat) {
    ProblemSpec p{domain, op, {}, {}};
    auto always = [](const Vec&) { return true; };
    auto flux = [domain, solution](const Vec& x) {
        return solution.normal_derivative(x, outward_normal(domain, x).normal);
    };
    if (layout == BcLayout::HeatsinkLite) {
        p.rhs = [](const Vec&) { return 0.0; };
        const int last = domain.dimension() - 1;
        const auto [lo, hi] = domain.bounding_box();
        const double mid = 0.5 * (lo[last] + hi[last]);
        p.bc.push_back({[last, mid](const Vec& x) { return x[last] < mid; }, Dirichlet{[t = heat.t_hot](const Vec&) {
                                                                                  return t;
                                                                              }}});
        p.bc.push_back({always, Robin{heat.alpha(), [t = heat.t_out](const Vec&) { return t; }}});
        return p;
    }
    p.rhs = solution.f_for(op);
    const ScalarField u = solution.u();
    switch (layout) {
        case BcLayout::DirichletAll: p.bc.push_back({always, Dirichlet{u}}); break;
        case BcLayout::MixedXGtHalf:
            p.bc.push_back({[](const Vec& x) { return x[0] > 0.5; }, Dirichlet{u}});
            p.bc.push_back({always, Neumann{flux}});
            break;
        case BcLayout::RobinAll:
            p.bc.push_back({always, Robin{robin_alpha, [u, flux, robin_alpha](const Vec& x) {
                                              return u(x) + robin_alpha * flux(x);
                                          }}});
            break;
        case BcLayout::HeatsinkLite: break;
    }
    return p;
}

}  // namespace stencil_lab
