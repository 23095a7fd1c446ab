#include "stencil_lab/nodegen.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "stencil_lab/neighbors.hpp"

namespace stencil_lab {

std::string role_name(NodeRole role) {
    switch (role) {
        case NodeRole::Interior: return "interior";
        case NodeRole::DirichletBoundary: return "dirichlet";
        case NodeRole::NeumannBoundary: return "neumann";
        case NodeRole::RobinBoundary: return "robin";
        case NodeRole::Ghost: return "ghost";
    }
    return "unknown";
}

NodeRole parse_role(const std::string& name) {
    if (name == "interior") return NodeRole::Interior;
    if (name == "dirichlet") return NodeRole::DirichletBoundary;
    if (name == "neumann") return NodeRole::NeumannBoundary;
    if (name == "robin") return NodeRole::RobinBoundary;
    if (name == "ghost") return NodeRole::Ghost;
    throw InputError("unknown node role '" + name + "'");
}

std::size_t NodeSet::interior_count() const {
    return static_cast<std::size_t>(std::count(roles.begin(), roles.end(), NodeRole::Interior));
}

void NodeSet::push(const Vec& x, NodeRole role, const Vec& normal, bool corner) {
    positions.push_back(x);
    roles.push_back(role);
    normals.push_back(normal);
    corners.push_back(corner ? 1 : 0);
    ghost_link.push_back(-1);
}

namespace {

// Bit-reproducible uniform [0, 1) draw (53 random mantissa bits).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class ProximityGrid {
public:
    ProximityGrid(const Vec& lo, const Vec& hi, double cell, int dim) : lo_(lo), cell_(cell), dim_(dim) {
        for (int d = 0; d < 3; ++d) {
            dims_[d] = d < dim ? std::max(1, static_cast<int>(std::ceil((hi[d] - lo[d]) / cell)) + 1) : 1;
        }
        cells_.resize(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2]);
    }

    void insert(const Vec& p, int idx) {
        cells_[flat(coord(p))].push_back(idx);
    }

    bool any_within(const Vec& p, double r, const std::vector<Vec>& pts) const {
        const auto c = coord(p);
        const double r2 = r * r;
        const int span = static_cast<int>(std::ceil(r / cell_));
        std::array<int, 3> lo{}, hi{};
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::max(0, c[d] - (d < dim_ ? span : 0));
            hi[d] = std::min(dims_[d] - 1, c[d] + (d < dim_ ? span : 0));
        }
        for (int i = lo[0]; i <= hi[0]; ++i)
            for (int j = lo[1]; j <= hi[1]; ++j)
                for (int k = lo[2]; k <= hi[2]; ++k)
                    for (int idx : cells_[flat({i, j, k})])
                        if (dist2(pts[idx], p) < r2) return true;
        return false;
    }

private:
    std::array<int, 3> coord(const Vec& p) const {
        std::array<int, 3> c{};
        for (int d = 0; d < 3; ++d)
            c[d] = d < dim_ ? std::clamp(static_cast<int>(std::floor((p[d] - lo_[d]) / cell_)), 0, dims_[d] - 1) : 0;
        return c;
    }
    std::size_t flat(const std::array<int, 3>& c) const {
        return (static_cast<std::size_t>(c[0]) * dims_[1] + c[1]) * dims_[2] + c[2];
    }

    Vec lo_;
    double cell_;
    int dim_;
    std::array<int, 3> dims_{};
    std::vector<std::vector<int>> cells_;
};

std::vector<Vec> fibonacci_sphere(int count) {
    std::vector<Vec> dirs;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(1.0 - z * z);
        dirs.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    return dirs;
}

// Uniform random rotation (Shoemake's quaternion construction) applied to v.
Vec random_rotation(const Vec& v, double u1, double u2, double u3) {
    const double a = std::sqrt(1 - u1), b = std::sqrt(u1);
    const double w = a * std::sin(2 * kPi * u2), x = a * std::cos(2 * kPi * u2);
    const double y = b * std::sin(2 * kPi * u3), z = b * std::cos(2 * kPi * u3);
    const double m[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                            {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                            {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2], m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

NodeSet with_boundary(const Domain& domain, const std::vector<BoundaryPoint>& boundary, double h,
                      std::uint64_t seed) {
    NodeSet ns;
    ns.dim = domain.dimension();
    ns.h = h;
    ns.seed = seed;
    for (const auto& b : boundary) ns.push(b.position, NodeRole::DirichletBoundary, b.normal, b.corner);
    return ns;
}

}  // namespace

NodeSet fill_advancing_front(const Domain& domain, const std::vector<BoundaryPoint>& boundary, double h,
                             std::uint64_t seed, const AdvancingFrontOptions& options) {
    if (!(h > 0)) throw InputError("spacing h must be positive");
    if (boundary.empty()) throw InputError("advancing front needs a discretized boundary");
    if (!(options.spacing_factor > 0 && options.spacing_factor <= 1))
        throw InputError("spacing factor must lie in (0, 1]");
    // Samples on both sides of an acute corner or cusp can sit closer than the guarantee; keep
    // corners first, then drop any sample within kBoundarySpacing * h of one already kept.
    constexpr double kBoundarySpacing = 0.9;
    std::vector<char> keep(boundary.size(), 0);
    std::vector<Vec> kept;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            if (boundary[i].corner != (pass == 0)) continue;
            const Vec& x = boundary[i].position;
            if (std::any_of(kept.begin(), kept.end(), [&](const Vec& k) { return dist(k, x) < kBoundarySpacing * h; }))
                continue;
            keep[i] = 1;
            kept.push_back(x);
        }
    std::vector<BoundaryPoint> thinned;
    for (std::size_t i = 0; i < boundary.size(); ++i)
        if (keep[i]) thinned.push_back(boundary[i]);
    NodeSet ns = with_boundary(domain, thinned, h, seed);
    const int dim = ns.dim;
    const double rmin = options.spacing_factor * h;

    auto [lo, hi] = domain.bounding_box();
    for (int d = 0; d < dim; ++d) lo[d] -= 2 * h, hi[d] += 2 * h;
    ProximityGrid grid(lo, hi, rmin, dim);
    for (std::size_t i = 0; i < ns.size(); ++i) grid.insert(ns.positions[i], static_cast<int>(i));

    std::mt19937_64 rng(seed);
    const std::vector<Vec> sphere = fibonacci_sphere(options.candidates_3d);
    std::vector<Vec> dirs;
    for (std::size_t cursor = 0; cursor < ns.size(); ++cursor) {
        const Vec p = ns.positions[cursor];
        dirs.clear();
        if (dim == 1) {
            dirs = {{-1, 0, 0}, {1, 0, 0}};
        } else if (dim == 2) {
            const double offset = 2 * kPi * uniform01(rng);
            for (int k = 0; k < options.candidates_2d; ++k) {
                const double a = offset + 2 * kPi * k / options.candidates_2d;
                dirs.push_back({std::cos(a), std::sin(a), 0});
            }
        } else {
            const double u1 = uniform01(rng), u2 = uniform01(rng), u3 = uniform01(rng);
            for (const Vec& s : sphere) dirs.push_back(random_rotation(s, u1, u2, u3));
        }
        for (const Vec& dvec : dirs) {
            const Vec c = p + h * dvec;
            if (!contains(domain, c)) continue;
            if (grid.any_within(c, rmin, ns.positions)) continue;
            ns.push(c, NodeRole::Interior);
            grid.insert(c, static_cast<int>(ns.size() - 1));
        }
    }
    ns.boundary_only = ns.interior_count() == 0;
    return ns;
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= base;
    }
    return result;
}

Vec halton_point(std::uint64_t index, int dim) {
    static constexpr unsigned kBases[3] = {2, 3, 5};
    Vec p{};
    for (int d = 0; d < dim; ++d) p[d] = radical_inverse(index, kBases[d]);
    return p;
}

NodeSet fill_halton(const Domain& domain, const std::vector<BoundaryPoint>& boundary, std::size_t target_count,
                    std::uint64_t skip) {
    if (target_count == 0) throw InputError("Halton fill needs a positive target count");
    const double h = boundary.size() >= 2 ? dist(boundary[0].position, boundary[1].position) : 0.0;
    NodeSet ns = with_boundary(domain, boundary, h, skip);
    const auto [lo, hi] = domain.bounding_box();
    const int dim = ns.dim;
    std::size_t accepted = 0;
    const std::uint64_t max_index = skip + 1000 * target_count + 1000;
    for (std::uint64_t idx = skip + 1; accepted < target_count && idx < max_index; ++idx) {
        const Vec u = halton_point(idx, dim);
        Vec x{};
        for (int d = 0; d < dim; ++d) x[d] = lo[d] + u[d] * (hi[d] - lo[d]);
        if (!contains(domain, x)) continue;
        ns.push(x, NodeRole::Interior);
        ++accepted;
    }
    ns.boundary_only = accepted == 0;
    return ns;
}

NodeSet fill_polar(const Domain& disc, double h, std::uint64_t seed) {
    const auto* d = std::get_if<Disc>(&disc.shape());
    if (d == nullptr) throw InputError("polar fill requires a disc domain");
    NodeSet ns = with_boundary(disc, discretize_boundary(disc, h), h, seed);
    std::mt19937_64 rng(seed);
    ns.push(d->center, NodeRole::Interior);
    const int rings = static_cast<int>(std::lround(d->radius / h)) - 1;
    for (int k = 1; k <= rings; ++k) {
        const double r = k * h;
        const int count = static_cast<int>(std::ceil(2 * kPi * r / h - 1e-12));
        const double phase = seed == 0 ? 0.0 : 2 * kPi * uniform01(rng);
        for (int j = 0; j < count; ++j) {
            const double a = phase + 2 * kPi * j / count;
            ns.push({d->center[0] + r * std::cos(a), d->center[1] + r * std::sin(a), 0}, NodeRole::Interior);
        }
    }
    return ns;
}

QualityMetrics quality(const NodeSet& nodes, const Domain& domain, int probe_density) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes.roles[i] != NodeRole::Ghost) pts.push_back(nodes.positions[i]);
    if (pts.size() < 2) throw InputError("separation distance needs at least two nodes");
    if (probe_density < 2) throw InputError("probe density must be at least 2");
    const int dim = nodes.dim;
    const SpatialIndex index(pts, dim);

    double delta2 = std::numeric_limits<double>::infinity();
    for (const Vec& p : pts) delta2 = std::min(delta2, index.knn(p, 2)[1].first);

    const auto [lo, hi] = domain.bounding_box();
    std::size_t probes = 1;
    for (int d = 0; d < dim; ++d) probes *= static_cast<std::size_t>(probe_density);
    std::vector<std::pair<double, Vec>> scored;
    for (std::uint64_t idx = 1; idx <= probes; ++idx) {
        const Vec u = halton_point(idx, dim);
        Vec x{};
        for (int d = 0; d < dim; ++d) x[d] = lo[d] + u[d] * (hi[d] - lo[d]);
        if (!contains(domain, x)) continue;
        scored.push_back({index.nearest(x).second, x});
    }
    if (scored.empty()) throw InputError("no probe fell inside the domain");
    const std::size_t keep = std::min<std::size_t>(scored.size(), std::max<std::size_t>(48, scored.size() / 4));
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });

    double extent = 0;
    for (int d = 0; d < dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
    const double step0 = extent / probe_density;
    const double step_min = 1e-9 * extent;
    double rho2 = 0;
    for (std::size_t k = 0; k < keep; ++k) {
        auto [best, x] = scored[k];
        for (double step = step0; step > step_min; step *= 0.5) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (int d = 0; d < dim; ++d)
                    for (double sgn : {-1.0, 1.0}) {
                        Vec y = x;
                        y[d] += sgn * step;
                        if (!contains(domain, y)) continue;
                        const double v = index.nearest(y).second;
                        if (v > best) best = v, x = y, moved = true;
                    }
            }
        }
        rho2 = std::max(rho2, best);
    }
    QualityMetrics q;
    q.rho = std::sqrt(rho2);
    q.delta = std::sqrt(delta2);
    q.gamma = q.rho / q.delta;
    return q;
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes, const std::vector<double>* extra,
                     const std::string& extra_name) {
    static const char* kAxes[3] = {"x", "y", "z"};
    static const char* kNormals[3] = {"nx", "ny", "nz"};
    const int dim = nodes.dim;
    for (int d = 0; d < dim; ++d) out << kAxes[d] << ',';
    out << "role";
    for (int d = 0; d < dim; ++d) out << ',' << kNormals[d];
    if (extra != nullptr) out << ',' << extra_name;
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int d = 0; d < dim; ++d) out << nodes.positions[i][d] << ',';
        out << role_name(nodes.roles[i]);
        for (int d = 0; d < dim; ++d) out << ',' << nodes.normals[i][d];
        if (extra != nullptr) out << ',' << (*extra)[i];
        out << '\n';
    }
}

NodeSet read_nodes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty node CSV");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto role_col = std::find(header.begin(), header.end(), "role") - header.begin();
    if (role_col < 1 || role_col > 3 || static_cast<std::size_t>(2 * role_col + 1) > header.size())
        throw InputError("malformed node CSV header");
    NodeSet ns;
    ns.dim = static_cast<int>(role_col);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < static_cast<std::size_t>(2 * ns.dim + 1)) throw InputError("short node CSV row");
        Vec x{}, n{};
        for (int d = 0; d < ns.dim; ++d) {
            x[d] = std::stod(cells[d]);
            n[d] = std::stod(cells[ns.dim + 1 + d]);
        }
        ns.push(x, parse_role(cells[ns.dim]), n);
    }
    return ns;
}

}  // namespace stencil_lab
