#include "stencil_lab/basis.hpp"

#include <algorithm>
#include <sstream>

namespace stencil_lab {

namespace {

// phi(r), f1 = phi'(r) / r and f2 = (phi'' - phi'/r) / r^2 for r > 0.
struct Radial {
    double phi;
    double f1;
    double f2;
};

double ipow(double r, int p) {
    if (p < 0) return 1.0 / ipow(r, -p);
    double out = 1.0;
    for (; p > 0; --p) out *= r;
    return out;
}

Radial radial_terms(const RadialKernel& kernel, double r) {
    switch (kernel.kind) {
        case RadialKernel::Kind::PhsOdd: {
            const int p = 2 * kernel.k + 1;
            return {ipow(r, p), p * ipow(r, p - 2), p * (p - 2.0) * ipow(r, p - 4)};
        }
        case RadialKernel::Kind::ThinPlate: {
            const int p = 2 * kernel.k;
            const double lr = std::log(r);
            return {ipow(r, p) * lr, ipow(r, p - 2) * (p * lr + 1.0),
                    ipow(r, p - 4) * (p * (p - 2.0) * lr + 2.0 * p - 2.0)};
        }
        case RadialKernel::Kind::Gaussian: {
            const double e2 = kernel.eps * kernel.eps;
            const double phi = std::exp(-e2 * r * r);
            return {phi, -2.0 * e2 * phi, 4.0 * e2 * e2 * phi};
        }
        case RadialKernel::Kind::Multiquadric: {
            const double e2 = kernel.eps * kernel.eps;
            const double phi = std::sqrt(1.0 + e2 * r * r);
            return {phi, e2 / phi, -e2 * e2 / (phi * phi * phi)};
        }
        case RadialKernel::Kind::InverseMultiquadric: {
            const double e2 = kernel.eps * kernel.eps;
            const double phi = 1.0 / std::sqrt(1.0 + e2 * r * r);
            const double p3 = phi * phi * phi;
            return {phi, -e2 * p3, 3.0 * e2 * e2 * p3 * phi * phi};
        }
    }
    return {0, 0, 0};
}

// Derivatives at r = 0 as analytic limits; f2 never contributes there since v = 0.
// Returns false when the requested derivative is genuinely singular.
bool origin_limit(const RadialKernel& kernel, int order, double& f1_limit) {
    switch (kernel.kind) {
        case RadialKernel::Kind::PhsOdd:
            // r^(2k+1) with k >= 1: f1 = p r^(p-2) -> 0
            f1_limit = 0.0;
            return true;
        case RadialKernel::Kind::ThinPlate:
            // k >= 2: f1 = r^(2k-2)(..log r..) -> 0. k == 1: f1 = 2 log r + 1 diverges, but first
            // derivatives v_i f1 still vanish; second derivatives do not exist.
            f1_limit = 0.0;
            return kernel.k >= 2 || order < 2;
        case RadialKernel::Kind::Gaussian: f1_limit = -2.0 * kernel.eps * kernel.eps; return true;
        case RadialKernel::Kind::Multiquadric: f1_limit = kernel.eps * kernel.eps; return true;
        case RadialKernel::Kind::InverseMultiquadric: f1_limit = -kernel.eps * kernel.eps; return true;
    }
    return false;
}

std::string format_eps(double eps) {
    std::ostringstream os;
    os << eps;
    return os.str();
}

}  // namespace

std::string RadialKernel::id() const {
    switch (kind) {
        case Kind::PhsOdd: return "phs" + std::to_string(2 * k + 1);
        case Kind::ThinPlate: return "tps" + std::to_string(2 * k);
        case Kind::Gaussian: return "gauss:" + format_eps(eps);
        case Kind::Multiquadric: return "mq:" + format_eps(eps);
        case Kind::InverseMultiquadric: return "imq:" + format_eps(eps);
    }
    return "?";
}

RadialKernel parse_kernel(const std::string& id) {
    auto parse_int = [&](const std::string& digits) {
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
            throw ConfigError("malformed kernel id '" + id + "'");
        return std::stoi(digits);
    };
    auto parse_eps = [&](std::size_t colon) {
        if (colon == std::string::npos) throw ConfigError("kernel '" + id + "' needs a shape parameter");
        double eps = 0;
        try {
            eps = std::stod(id.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("malformed shape parameter in '" + id + "'");
        }
        if (!(eps > 0)) throw ConfigError("shape parameter must be positive in '" + id + "'");
        return eps;
    };
    if (id.rfind("phs", 0) == 0) {
        const int p = parse_int(id.substr(3));
        if (p < 3 || p % 2 == 0) throw ConfigError("PHS exponent must be odd and >= 3: '" + id + "'");
        return RadialKernel::phs((p - 1) / 2);
    }
    if (id.rfind("tps", 0) == 0) {
        const int p = parse_int(id.substr(3));
        if (p < 2 || p % 2 != 0) throw ConfigError("TPS exponent must be even and >= 2: '" + id + "'");
        return RadialKernel::tps(p / 2);
    }
    const auto colon = id.find(':');
    const std::string head = id.substr(0, colon);
    if (head == "gauss") return RadialKernel::gaussian(parse_eps(colon));
    if (head == "mq") return RadialKernel::multiquadric(parse_eps(colon));
    if (head == "imq") return RadialKernel::inverse_multiquadric(parse_eps(colon));
    throw ConfigError("unknown kernel '" + id + "'");
}

double kernel_value(const RadialKernel& kernel, double r) {
    if (r < 0) throw InputError("kernel radius must be non-negative");
    if (r == 0.0) {
        switch (kernel.kind) {
            case RadialKernel::Kind::PhsOdd:
            case RadialKernel::Kind::ThinPlate: return 0.0;
            default: break;
        }
    }
    return radial_terms(kernel, r).phi;
}

double kernel_derivative(const RadialKernel& kernel, const MultiIndex& alpha, const Vec& v, OriginPolicy policy) {
    const int order = alpha.total();
    if (order > 2) throw InputError("kernel derivatives are available up to second order");
    const double r = norm(v);
    if (order == 0) return kernel_value(kernel, r);

    double f1 = 0, f2 = 0;
    if (r == 0.0) {
        if (!origin_limit(kernel, order, f1)) {
            if (policy == OriginPolicy::Throw)
                throw SingularityError("kernel " + kernel.id() + " has no second derivative at r = 0", -1,
                                       std::numeric_limits<double>::infinity());
            return 0.0;
        }
    } else {
        const Radial t = radial_terms(kernel, r);
        f1 = t.f1;
        f2 = t.f2;
    }

    int i = -1, j = -1;
    for (int d = 0; d < 3; ++d)
        for (int c = 0; c < alpha[d]; ++c) (i < 0 ? i : j) = d;
    if (order == 1) return v[i] * f1;
    if (r == 0.0) return i == j ? f1 : 0.0;
    return (i == j ? f1 : 0.0) + v[i] * v[j] * f2;
}

std::size_t monomial_count(int m, int dim) {
    std::size_t c = 1;
    for (int k = 1; k <= dim; ++k) c = c * static_cast<std::size_t>(m + k) / static_cast<std::size_t>(k);
    return c;
}

MonomialBasis monomial_basis(int m, int dim) {
    if (m < 0) throw InputError("augmentation degree must be non-negative");
    if (dim < 1 || dim > 3) throw InputError("dimension must be 1, 2 or 3");
    MonomialBasis basis{m, dim, {}};
    for (int deg = 0; deg <= m; ++deg) {
        if (dim == 1) {
            basis.exponents.push_back({{deg, 0, 0}});
        } else if (dim == 2) {
            for (int a = deg; a >= 0; --a) basis.exponents.push_back({{a, deg - a, 0}});
        } else {
            for (int a = deg; a >= 0; --a)
                for (int b = deg - a; b >= 0; --b) basis.exponents.push_back({{a, b, deg - a - b}});
        }
    }
    return basis;
}

double monomial_derivative(const MultiIndex& exponent, const MultiIndex& alpha, const Vec& x) {
    double value = 1.0;
    for (int d = 0; d < 3; ++d) {
        const int e = exponent[d], a = alpha[d];
        if (a > e) return 0.0;
        for (int f = 0; f < a; ++f) value *= e - f;
        for (int p = 0; p < e - a; ++p) value *= x[d];
    }
    return value;
}

int LinearOperator::order() const {
    int o = 0;
    for (const auto& t : terms) o = std::max(o, t.alpha.total());
    return o;
}

bool LinearOperator::constant_coefficients() const {
    return std::none_of(terms.begin(), terms.end(), [](const OperatorTerm& t) { return bool(t.coefficient); });
}

bool LinearOperator::has_zeroth_order_term() const {
    return std::any_of(terms.begin(), terms.end(), [](const OperatorTerm& t) { return t.alpha.total() == 0; });
}

double LinearOperator::apply(const std::function<double(const MultiIndex&, const Vec&)>& derivative,
                             const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff(x) * derivative(t.alpha, x);
    return s;
}

double LinearOperator::apply_to_monomial(const MultiIndex& exponent, const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coeff(x) * monomial_derivative(exponent, t.alpha, x);
    return s;
}

namespace {

MultiIndex axis(int d, int count = 1) {
    MultiIndex a;
    a.orders[d] = count;
    return a;
}

MultiIndex mixed(int d1, int d2) {
    MultiIndex a;
    a.orders[d1] += 1;
    a.orders[d2] += 1;
    return a;
}

LinearOperator laplacian(int dim) {
    LinearOperator op{"laplacian", dim, {}};
    for (int d = 0; d < dim; ++d) op.terms.push_back({axis(d, 2), 1.0, {}});
    return op;
}

}  // namespace

LinearOperator identity_operator(int dim) { return {"identity", dim, {{MultiIndex{}, 1.0, {}}}}; }

LinearOperator normal_derivative(const Vec& normal, int dim) {
    LinearOperator op{"normal_derivative", dim, {}};
    for (int d = 0; d < dim; ++d)
        if (normal[d] != 0.0) op.terms.push_back({axis(d), normal[d], {}});
    if (op.terms.empty()) throw InputError("normal derivative needs a non-zero normal");
    return op;
}

LinearOperator combine(const LinearOperator& a, const LinearOperator& b, double scale) {
    LinearOperator out{a.name + "+" + b.name, a.dim, a.terms};
    for (OperatorTerm t : b.terms) {
        if (t.coefficient) {
            auto f = t.coefficient;
            t.coefficient = [f, scale](const Vec& x) { return scale * f(x); };
        } else {
            t.constant *= scale;
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

LinearOperator operator_registry(const std::string& name, int dim) {
    if (dim < 1 || dim > 3) throw InputError("dimension must be 1, 2 or 3");
    auto need2d = [&] {
        if (dim != 2) throw ConfigError("operator '" + name + "' is defined in 2D only");
    };
    auto need_axis = [&](int d) {
        if (d >= dim) throw ConfigError("operator '" + name + "' needs dimension > " + std::to_string(d));
    };
    if (name == "laplacian") return laplacian(dim);
    if (name == "identity") return identity_operator(dim);
    static const std::string kAxes = "xyz";
    if (name.size() == 2 && name[0] == 'd' && kAxes.find(name[1]) != std::string::npos) {
        const int d = static_cast<int>(kAxes.find(name[1]));
        need_axis(d);
        return {name, dim, {{axis(d), 1.0, {}}}};
    }
    if (name.size() == 3 && name[0] == 'd' && kAxes.find(name[1]) != std::string::npos &&
        kAxes.find(name[2]) != std::string::npos) {
        const int d1 = static_cast<int>(kAxes.find(name[1])), d2 = static_cast<int>(kAxes.find(name[2]));
        need_axis(std::max(d1, d2));
        return {name, dim, {{mixed(d1, d2), 1.0, {}}}};
    }
    if (name == "L1") {
        need2d();
        LinearOperator op = laplacian(2);
        op.name = name;
        op.terms.push_back({mixed(0, 1), 1.0, {}});
        return op;
    }
    if (name == "L2") {
        need2d();
        LinearOperator op = laplacian(2);
        op.name = name;
        op.terms.push_back({axis(0), 1.0, {}});
        op.terms.push_back({axis(1), 1.0, {}});
        return op;
    }
    if (name == "L3") {
        need2d();
        return {name,
                2,
                {{axis(0, 2), 1.0, [](const Vec& x) { return x[0]; }},
                 {axis(1, 2), 1.0, [](const Vec& x) { return x[1] * x[1]; }}}};
    }
    if (name == "L4" || name == "L5") {
        need2d();
        LinearOperator op = laplacian(2);
        op.name = name;
        op.terms.push_back({MultiIndex{}, name == "L4" ? 1.0 : 10.0, {}});
        return op;
    }
    throw ConfigError("unknown operator '" + name + "'");
}

std::vector<std::string> operator_names() { return {"laplacian", "L1", "L2", "L3", "L4", "L5", "identity"}; }

}  // namespace stencil_lab
