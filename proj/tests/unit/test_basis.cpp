#include <doctest.h>

#include "oracles.hpp"
#include "stencil_lab/basis.hpp"

using namespace stencil_lab;

namespace {

// Closed-form profiles written independently of the library, in extended precision so that
// step-1e-5 second differences are not dominated by rounding.
using Real = long double;

Real profile(const std::string& id, Real r) {
    if (id == "phs3") return r * r * r;
    if (id == "phs5") return r * r * r * r * r;
    if (id == "tps2") return r == 0 ? 0 : r * r * std::log(r);
    if (id == "tps4") return r == 0 ? 0 : r * r * r * r * std::log(r);
    if (id == "gauss:1") return std::exp(-r * r);
    if (id == "gauss:0.5") return std::exp(-0.25L * r * r);
    if (id == "mq:1") return std::sqrt(1 + r * r);
    if (id == "imq:1") return 1 / std::sqrt(1 + r * r);
    if (id == "imq:2") return 1 / std::sqrt(1 + 4 * r * r);
    throw std::logic_error(id);
}

using RVec = std::array<Real, 3>;

Real radial(const std::string& id, const RVec& x) { return profile(id, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); }

Real fd_derivative(const std::string& id, const MultiIndex& a, const Vec& v, Real s) {
    std::vector<int> axes;
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < a[d]; ++k) axes.push_back(d);
    const RVec x{v[0], v[1], v[2]};
    auto at = [&](int i, Real si, int j, Real sj) {
        RVec y = x;
        if (i >= 0) y[i] += si;
        if (j >= 0) y[j] += sj;
        return radial(id, y);
    };
    if (axes.empty()) return radial(id, x);
    if (axes.size() == 1) return (at(axes[0], s, -1, 0) - at(axes[0], -s, -1, 0)) / (2 * s);
    if (axes[0] == axes[1]) return (at(axes[0], s, -1, 0) - 2 * radial(id, x) + at(axes[0], -s, -1, 0)) / (s * s);
    return (at(axes[0], s, axes[1], s) - at(axes[0], s, axes[1], -s) - at(axes[0], -s, axes[1], s) +
            at(axes[0], -s, axes[1], -s)) /
           (4 * s * s);
}

const std::vector<std::string> kKernels = {"phs3", "phs5", "tps2", "tps4", "gauss:1", "gauss:0.5", "mq:1", "imq:1", "imq:2"};

std::vector<MultiIndex> alphas(int dim) {
    std::vector<MultiIndex> out;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2 - a; ++b)
            for (int c = 0; c <= 2 - a - b; ++c) {
                if ((dim < 2 && b > 0) || (dim < 3 && c > 0)) continue;
                out.push_back(MultiIndex{{a, b, c}});
            }
    return out;
}

}  // namespace

TEST_SUITE("basis") {
    TEST_CASE("kernel values") {
        CHECK(kernel_value(RadialKernel::phs(1), 2.0) == 8.0);
        CHECK(kernel_value(RadialKernel::tps(1), 1.0) == 0.0);
        CHECK(kernel_value(RadialKernel::gaussian(1.0), 0.0) == 1.0);
        for (const std::string& id : kKernels)
            for (double r : {0.0, 0.3, 1.0, 1.7}) CHECK(kernel_value(parse_kernel(id), r) == doctest::Approx(static_cast<double>(profile(id, r))));
    }

    TEST_CASE("kernel ids round-trip and bad ids are rejected") {
        for (const std::string& id : kKernels) CHECK(parse_kernel(id).id() == id);
        for (const std::string& bad : {"phs2", "tps3", "gauss", "mq:-1", "foo", "phs"})
            CHECK_THROWS_AS(parse_kernel(bad), ConfigError);
    }

    TEST_CASE("PHS Laplacian in 2D at unit distance is 9") {
        const MultiIndex xx{{2, 0, 0}}, yy{{0, 2, 0}};
        const Vec v{0.6, 0.8, 0};
        const double lap = kernel_derivative(RadialKernel::phs(1), xx, v) + kernel_derivative(RadialKernel::phs(1), yy, v);
        CHECK(lap == doctest::Approx(9.0).epsilon(1e-12));
        auto f = [](const Vec& x) { return std::pow(std::hypot(x[0], x[1]), 3); };
        CHECK(std::abs(oracle::fd2(f, v, 0, 0, 1e-5) + oracle::fd2(f, v, 1, 1, 1e-5) - 9.0) < 1e-5);
    }

    TEST_CASE("removable singularities at the origin") {
        const Vec zero{};
        for (const MultiIndex& a : alphas(2)) {
            CHECK(kernel_derivative(RadialKernel::phs(1), a, zero) == 0.0);
            CHECK(kernel_derivative(RadialKernel::phs(2), a, zero) == 0.0);
            CHECK(kernel_derivative(RadialKernel::tps(2), a, zero) == 0.0);
        }
        CHECK(kernel_derivative(RadialKernel::gaussian(1.0), MultiIndex{{2, 0, 0}}, zero) == doctest::Approx(-2.0));
        auto g = [](const Vec& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); };
        CHECK(oracle::fd2(g, zero, 0, 0, 1e-5) == doctest::Approx(-2.0).epsilon(1e-5));
        // r^2 log r: second derivatives diverge at 0; the right-hand-side convention maps them to 0.
        CHECK_THROWS_AS(kernel_derivative(RadialKernel::tps(1), MultiIndex{{2, 0, 0}}, zero), SingularityError);
        CHECK(kernel_derivative(RadialKernel::tps(1), MultiIndex{{2, 0, 0}}, zero, OriginPolicy::Zero) == 0.0);
        CHECK(kernel_derivative(RadialKernel::tps(1), MultiIndex{{1, 0, 0}}, zero) == 0.0);
    }

    TEST_CASE("property: kernel derivatives match central differences") {
        oracle::Gen gen(21);
        int checked = 0;
        for (const std::string& id : kKernels) {
            const RadialKernel k = parse_kernel(id);
            for (int dim = 1; dim <= 3; ++dim) {
                for (int t = 0; t < 200; ++t) {
                    const Vec v = gen.uniform(0.1, 2.0) * gen.direction(dim);
                    for (const MultiIndex& a : alphas(dim)) {
                        const double exact = kernel_derivative(k, a, v);
                        const double fd = static_cast<double>(fd_derivative(id, a, v, 1e-5L));
                        INFO(id, " dim ", dim, " alpha ", a[0], a[1], a[2]);
                        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
                        ++checked;
                    }
                }
            }
        }
        CHECK(checked > 10000);
    }

    TEST_CASE("property: sign flips obey parity") {
        oracle::Gen gen(22);
        for (const std::string& id : kKernels) {
            const RadialKernel k = parse_kernel(id);
            for (int t = 0; t < 100; ++t) {
                const Vec v = gen.uniform(0.1, 2.0) * gen.direction(3);
                const int mask = gen.integer(1, 7);
                Vec w = v;
                for (int d = 0; d < 3; ++d)
                    if (mask & (1 << d)) w[d] = -w[d];
                for (const MultiIndex& a : alphas(3)) {
                    int flipped = 0;
                    for (int d = 0; d < 3; ++d)
                        if (mask & (1 << d)) flipped += a[d];
                    const double sign = flipped % 2 ? -1.0 : 1.0;
                    CHECK(kernel_derivative(k, a, w) == doctest::Approx(sign * kernel_derivative(k, a, v)).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("monomial counts") {
        CHECK(monomial_count(3, 2) == 10);
        CHECK(monomial_count(0, 1) == 1);
        CHECK(monomial_count(0, 3) == 1);
        CHECK(monomial_count(2, 3) == 10);
        for (int m = 0; m <= 8; ++m)
            for (int d = 1; d <= 3; ++d) {
                const MonomialBasis b = monomial_basis(m, d);
                CHECK(static_cast<double>(b.size()) == oracle::binomial(m + d, d));
                CHECK(b.size() == monomial_count(m, d));
                for (std::size_t i = 1; i < b.size(); ++i) CHECK(b.exponents[i - 1].total() <= b.exponents[i].total());
                for (const MultiIndex& e : b.exponents) CHECK(e.total() <= m);
            }
    }

    TEST_CASE("monomial derivatives") {
        const Vec x{0.3, 0.7, 0};
        CHECK(monomial_derivative(MultiIndex{{2, 0, 0}}, MultiIndex{{2, 0, 0}}, x) == 2.0);
        CHECK(monomial_derivative(MultiIndex{{1, 1, 0}}, MultiIndex{{1, 1, 0}}, x) == 1.0);
        CHECK(monomial_value(MultiIndex{{4, 5, 0}}, Vec{1, 1, 0}) == 1.0);
        CHECK(monomial_derivative(MultiIndex{{1, 0, 0}}, MultiIndex{{2, 0, 0}}, x) == 0.0);
        CHECK(monomial_derivative(MultiIndex{{3, 2, 0}}, MultiIndex{{1, 1, 0}}, x) == doctest::Approx(3 * 0.09 * 2 * 0.7));
    }

    TEST_CASE("operator registry") {
        const LinearOperator lap = operator_registry("laplacian", 2);
        REQUIRE(lap.terms.size() == 2);
        CHECK(lap.terms[0].alpha == MultiIndex{{2, 0, 0}});
        CHECK(lap.terms[1].alpha == MultiIndex{{0, 2, 0}});
        CHECK(lap.terms[0].coeff({}) == 1.0);
        CHECK(lap.order() == 2);
        CHECK(operator_registry("identity", 2).order() == 0);
        CHECK(operator_registry("dx", 2).order() == 1);

        CHECK(operator_registry("L3", 2).apply_to_monomial(MultiIndex{{2, 0, 0}}, Vec{0.5, 0.3, 0}) == doctest::Approx(1.0));
        CHECK_FALSE(operator_registry("L3", 2).constant_coefficients());
        CHECK(operator_registry("L5", 2).has_zeroth_order_term());

        const Vec x{0.21, 0.64, 0};
        auto u = [](const MultiIndex& a, const Vec& p) {
            const double sx = std::sin(kPi * p[0]), cx = std::cos(kPi * p[0]);
            const double sy = std::sin(kPi * p[1]), cy = std::cos(kPi * p[1]);
            const double dx[3] = {sx, kPi * cx, -kPi * kPi * sx};
            const double dy[3] = {sy, kPi * cy, -kPi * kPi * sy};
            return dx[a[0]] * dy[a[1]];
        };
        const double uval = std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
        CHECK(operator_registry("L5", 2).apply(u, x) == doctest::Approx(-2 * kPi * kPi * uval + 10 * uval));
        CHECK_THROWS_AS(operator_registry("L9", 2), ConfigError);
        CHECK_THROWS_AS(operator_registry("L1", 3), ConfigError);
        CHECK_THROWS_AS(operator_registry("dz", 2), ConfigError);
    }

    TEST_CASE("property: operators act linearly on sums of monomials") {
        oracle::Gen gen(31);
        const MonomialBasis basis = monomial_basis(4, 2);
        for (const std::string& name : operator_names()) {
            const LinearOperator op = operator_registry(name, 2);
            for (int t = 0; t < 50; ++t) {
                const Vec x = gen.point(2);
                std::vector<double> c(basis.size());
                for (double& v : c) v = gen.uniform(-1, 1);
                auto sum = [&](const MultiIndex& a, const Vec& p) {
                    double s = 0;
                    for (std::size_t i = 0; i < basis.size(); ++i) s += c[i] * monomial_derivative(basis.exponents[i], a, p);
                    return s;
                };
                double parts = 0;
                for (std::size_t i = 0; i < basis.size(); ++i) parts += c[i] * op.apply_to_monomial(basis.exponents[i], x);
                CHECK(std::abs(op.apply(sum, x) - parts) <= 1e-12 * std::max(1.0, std::abs(parts)));
            }
        }
    }

    TEST_CASE("normal derivative and combination") {
        const LinearOperator dn = normal_derivative({0.6, 0.8, 0}, 2);
        CHECK(dn.apply_to_monomial(MultiIndex{{1, 0, 0}}, {}) == doctest::Approx(0.6));
        CHECK(dn.apply_to_monomial(MultiIndex{{0, 1, 0}}, {}) == doctest::Approx(0.8));
        const LinearOperator robin = combine(identity_operator(2), dn, 2.0);
        CHECK(robin.apply_to_monomial(MultiIndex{{0, 1, 0}}, Vec{0, 0.5, 0}) == doctest::Approx(0.5 + 1.6));
    }
}
