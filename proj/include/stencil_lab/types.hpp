#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace stencil_lab {

/// Spatial point or displacement. Components beyond the active dimension are zero.
using Vec = std::array<double, 3>;

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double dist2(const Vec& a, const Vec& b) {
    const Vec d = a - b;
    return dot(d, d);
}
inline double dist(const Vec& a, const Vec& b) { return std::sqrt(dist2(a, b)); }
inline Vec normalized(const Vec& a) { return (1.0 / norm(a)) * a; }

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments (dimension mismatch, out-of-range sizes).
class InputError : public Error {
public:
    using Error::Error;
};

/// Inconsistent experiment or problem setup.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Local weight system is singular or too badly conditioned to trust.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, std::ptrdiff_t node, double condition)
        : Error(what), node_(node), condition_(condition) {}
    std::ptrdiff_t node() const { return node_; }
    double condition() const { return condition_; }

private:
    std::ptrdiff_t node_;
    double condition_;
};

/// Global solve failed (factorization breakdown or iteration did not converge).
class SolverError : public Error {
public:
    SolverError(const std::string& what, long iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}
    long iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    long iterations_;
    double residual_;
};

}  // namespace stencil_lab
