#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stencil_lab/types.hpp"

namespace stencil_lab {

/// Per-axis derivative orders of D^alpha.
struct MultiIndex {
    std::array<int, 3> orders{0, 0, 0};

    int total() const { return orders[0] + orders[1] + orders[2]; }
    int operator[](int d) const { return orders[d]; }
    bool operator==(const MultiIndex&) const = default;
};

struct RadialKernel {
    enum class Kind { PhsOdd, ThinPlate, Gaussian, Multiquadric, InverseMultiquadric };

    Kind kind = Kind::PhsOdd;
    int k = 1;         // PHS r^(2k+1), TPS r^(2k) log r
    double eps = 1.0;  // shape parameter of the smooth kernels, applied to the scaled radius

    static RadialKernel phs(int k) { return {Kind::PhsOdd, k, 0.0}; }
    static RadialKernel tps(int k) { return {Kind::ThinPlate, k, 0.0}; }
    static RadialKernel gaussian(double eps) { return {Kind::Gaussian, 0, eps}; }
    static RadialKernel multiquadric(double eps) { return {Kind::Multiquadric, 0, eps}; }
    static RadialKernel inverse_multiquadric(double eps) { return {Kind::InverseMultiquadric, 0, eps}; }

    /// Round-trips through parse_kernel: phs3, tps2, gauss:1, mq:0.1, ...
    std::string id() const;
};

/// Accepts phs<odd p>, tps<even p>, gauss:<eps>, mq:<eps>, imq:<eps>.
RadialKernel parse_kernel(const std::string& id);

double kernel_value(const RadialKernel& kernel, double r);

enum class OriginPolicy {
    Throw,  // genuine singularities at r = 0 raise SingularityError
    Zero,   // ... or contribute 0 (used when assembling weight right-hand sides)
};

/// D^alpha of x -> phi(|x|) evaluated at displacement v, |alpha| <= 2.
double kernel_derivative(const RadialKernel& kernel, const MultiIndex& alpha, const Vec& v,
                         OriginPolicy policy = OriginPolicy::Throw);

struct MonomialBasis {
    int m = 0;
    int dim = 2;
    std::vector<MultiIndex> exponents;  // graded lexicographic

    std::size_t size() const { return exponents.size(); }
};

MonomialBasis monomial_basis(int m, int dim);
/// Number of monomials of total degree <= m in dim variables, C(m + dim, dim).
std::size_t monomial_count(int m, int dim);

double monomial_derivative(const MultiIndex& exponent, const MultiIndex& alpha, const Vec& x);
inline double monomial_value(const MultiIndex& exponent, const Vec& x) { return monomial_derivative(exponent, {}, x); }

/// One term c(x) D^alpha. A null coefficient function means the constant applies.
struct OperatorTerm {
    MultiIndex alpha;
    double constant = 1.0;
    std::function<double(const Vec&)> coefficient;

    double coeff(const Vec& x) const { return coefficient ? coefficient(x) : constant; }
};

struct LinearOperator {
    std::string name;
    int dim = 2;
    std::vector<OperatorTerm> terms;

    int order() const;
    bool constant_coefficients() const;
    bool has_zeroth_order_term() const;

    /// sum_t c_t(x) D^alpha_t u(x) with D^alpha u supplied by the caller.
    double apply(const std::function<double(const MultiIndex&, const Vec&)>& derivative, const Vec& x) const;
    double apply_to_monomial(const MultiIndex& exponent, const Vec& x) const;
};

/// laplacian, L1..L5 (2D), identity, dx, dy, dz, dxx, dyy, dzz, dxy.
LinearOperator operator_registry(const std::string& name, int dim);
std::vector<std::string> operator_names();

LinearOperator identity_operator(int dim);
LinearOperator normal_derivative(const Vec& normal, int dim);
/// a + scale * b
LinearOperator combine(const LinearOperator& a, const LinearOperator& b, double scale = 1.0);

}  // namespace stencil_lab
