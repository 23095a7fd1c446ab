#pragma once

// Independent reference computations used by the unit tests. None of these call into the
// library's numerical kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "stencil_lab/types.hpp"

namespace oracle {

using stencil_lab::Vec;

/// Seeded generator for property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    Vec point(int dim, double lo = 0.0, double hi = 1.0) {
        Vec p{};
        for (int d = 0; d < dim; ++d) p[d] = uniform(lo, hi);
        return p;
    }
    Vec direction(int dim) {
        for (;;) {
            Vec v = point(dim, -1.0, 1.0);
            const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (r > 0.1 && r <= 1.0) return {v[0] / r, v[1] / r, v[2] / r};
        }
    }
};

inline double distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

/// k nearest indices by full sort on (squared distance, index).
inline std::vector<int> knn(const std::vector<Vec>& pts, const Vec& q, std::size_t k) {
    std::vector<std::pair<double, int>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += (pts[i][d] - q[d]) * (pts[i][d] - q[d]);
        all.emplace_back(s, static_cast<int>(i));
    }
    std::sort(all.begin(), all.end());
    std::vector<int> out;
    for (std::size_t i = 0; i < k && i < all.size(); ++i) out.push_back(all[i].second);
    return out;
}

inline double min_pair_distance(const std::vector<Vec>& pts) {
    double best = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, distance(pts[i], pts[j]));
    return best;
}

/// Central finite difference of f along axis a (first) or axes a, b (second, mixed or pure).
inline double fd1(const std::function<double(const Vec&)>& f, const Vec& x, int a, double s) {
    Vec p = x, m = x;
    p[a] += s;
    m[a] -= s;
    return (f(p) - f(m)) / (2 * s);
}
inline double fd2(const std::function<double(const Vec&)>& f, const Vec& x, int a, int b, double s) {
    if (a == b) {
        Vec p = x, m = x;
        p[a] += s;
        m[a] -= s;
        return (f(p) - 2 * f(x) + f(m)) / (s * s);
    }
    auto shifted = [&](double sa, double sb) {
        Vec y = x;
        y[a] += sa;
        y[b] += sb;
        return f(y);
    };
    return (shifted(s, s) - shifted(s, -s) - shifted(-s, s) + shifted(-s, -s)) / (4 * s * s);
}

/// Gaussian elimination with partial pivoting on a small dense system.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

/// n points in the unit ball around the origin (point 0 is the origin) with pairwise distance at
/// least 0.3 times the mean spacing of n points filling that ball.
inline std::vector<Vec> random_cloud(Gen& gen, int n, int dim) {
    const double unit_volume = dim == 1 ? 2.0 : (dim == 2 ? 3.14159265358979323846 : 4.18879020478639098);
    const double spacing = std::pow(unit_volume / n, 1.0 / dim);
    for (;;) {
        std::vector<Vec> pts{Vec{}};
        int attempts = 0;
        while (static_cast<int>(pts.size()) < n && attempts < 100000) {
            ++attempts;
            const Vec p = gen.point(dim, -1.0, 1.0);
            if (distance(p, Vec{}) > 1.0) continue;
            bool ok = true;
            for (const Vec& q : pts) ok = ok && distance(p, q) >= 0.3 * spacing;
            if (ok) pts.push_back(p);
        }
        if (static_cast<int>(pts.size()) == n) return pts;
    }
}

/// D^alpha of the monomial x^e at the origin: e! when alpha == e, else 0.
inline double monomial_at_origin(const std::array<int, 3>& e, const std::array<int, 3>& alpha) {
    if (e != alpha) return 0.0;
    double f = 1.0;
    for (int d = 0; d < 3; ++d)
        for (int k = 2; k <= e[d]; ++k) f *= k;
    return f;
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle
