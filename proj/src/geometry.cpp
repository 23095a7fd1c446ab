#include "stencil_lab/geometry.hpp"

#include <algorithm>
#include <functional>

namespace stencil_lab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kCornerTol = 1e-9;

double rose_radius(double phi) {
    const double c = std::abs(std::cos(1.5 * phi));
    if (c == 0.0) return 0.25;  // limit of |c|^s with s -> 0
    return 0.25 * std::pow(c, std::sin(3.0 * phi));
}

// r'(phi) / r(phi); +inf where cos(1.5 phi) vanishes.
double rose_log_derivative(double phi) {
    const double c = std::abs(std::cos(1.5 * phi));
    const double s = std::sin(1.5 * phi);
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return 3.0 * std::cos(3.0 * phi) * std::log(c) - 3.0 * s * s;
}

Vec rose_normal_local(double phi) {
    const Vec er{std::cos(phi), std::sin(phi), 0.0};
    const Vec ephi{-std::sin(phi), std::cos(phi), 0.0};
    const double g = rose_log_derivative(phi);
    if (!std::isfinite(g)) return -1.0 * ephi;
    return normalized(er - g * ephi);
}

Vec nephroid_point(double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {0.75 * c - 0.5 * c * c * c, 0.5 * s * s * s, 0.0};
}

Vec nephroid_normal_local(double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double dx = s * (1.5 * c * c - 0.75);
    const double dy = 1.5 * s * s * c;
    if (std::abs(s) < 1e-12) {
        // cusp: limit taken from the piece with the larger parameter start (t -> 0+ or t -> pi+)
        return c > 0 ? Vec{0.0, -1.0, 0.0} : Vec{0.0, 1.0, 0.0};
    }
    return normalized(Vec{dy, -dx, 0.0});
}

// Half-width of the nephroid's horizontal slice at height y (local frame); negative outside |y| < 0.5.
double nephroid_half_width(double y) {
    if (std::abs(y) >= 0.5) return -1.0;
    const double s2 = std::pow(2.0 * std::abs(y), 2.0 / 3.0);
    const double c = std::sqrt(std::max(0.0, 1.0 - s2));
    return c * (0.75 - 0.5 * c * c);
}

std::array<Vec, 3> ccw_triangle(const Triangle& t) {
    const Vec e1 = t.v2 - t.v1, e2 = t.v3 - t.v1;
    const double area2 = e1[0] * e2[1] - e1[1] * e2[0];
    if (area2 >= 0) return {t.v1, t.v2, t.v3};
    return {t.v1, t.v3, t.v2};
}

Vec edge_normal(const Vec& a, const Vec& b) {
    const Vec d = b - a;
    return normalized(Vec{d[1], -d[0], 0.0});
}

// One smooth boundary piece; the point at t0 is a corner when corner_at_start is set.
struct Piece {
    std::function<Vec(double)> position;
    std::function<Vec(double)> normal;
    double t0 = 0.0;
    double t1 = 1.0;
    bool corner_at_start = false;
};

// Arc-length marcher: samples the piece densely, then places ceil(L/h) points at equal arc
// spacing. The end point is excluded since it is the start of the following piece.
void march_piece(const Piece& piece, double h, std::vector<BoundaryPoint>& out) {
    const int fine = 20000;
    std::vector<double> ts(fine + 1), arc(fine + 1, 0.0);
    Vec prev = piece.position(piece.t0);
    ts[0] = piece.t0;
    for (int k = 1; k <= fine; ++k) {
        ts[k] = piece.t0 + (piece.t1 - piece.t0) * k / fine;
        const Vec p = piece.position(ts[k]);
        arc[k] = arc[k - 1] + dist(p, prev);
        prev = p;
    }
    const double length = arc[fine];
    const int segments = std::max(1, static_cast<int>(std::ceil(length / h - 1e-9)));
    for (int k = 0; k < segments; ++k) {
        const double target = length * k / segments;
        const auto it = std::lower_bound(arc.begin(), arc.end(), target);
        const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - arc.begin()));
        const double span = arc[j] - arc[j - 1];
        const double frac = span > 0 ? (target - arc[j - 1]) / span : 0.0;
        const double t = k == 0 ? piece.t0 : ts[j - 1] + frac * (ts[j] - ts[j - 1]);
        BoundaryPoint bp;
        bp.position = piece.position(t);
        bp.normal = piece.normal(t);
        bp.arc_parameter = t;
        bp.corner = k == 0 && piece.corner_at_start;
        out.push_back(bp);
    }
}

Piece circle_piece(const Vec& c, double r, bool outward) {
    Piece p;
    p.position = [c, r](double t) { return Vec{c[0] + r * std::cos(t), c[1] + r * std::sin(t), 0.0}; };
    const double sign = outward ? 1.0 : -1.0;
    p.normal = [sign](double t) { return Vec{sign * std::cos(t), sign * std::sin(t), 0.0}; };
    p.t0 = 0.0;
    p.t1 = 2 * kPi;
    return p;
}

Piece segment_piece(const Vec& a, const Vec& b, bool corner) {
    Piece p;
    p.position = [a, b](double t) { return a + t * (b - a); };
    const Vec n = edge_normal(a, b);
    p.normal = [n](double) { return n; };
    p.corner_at_start = corner;
    return p;
}

// Pac-Man pieces in the unrotated frame: the arc from angle 0 to 3pi/2, the vertical edge up
// to the centre, then the horizontal edge back out to (cx + r, cy).
std::vector<Piece> pacman_pieces(const PacMan& pm) {
    const Vec c = pm.center;
    const double r = pm.radius;
    Piece arc = circle_piece(c, r, true);
    arc.t1 = 1.5 * kPi;
    arc.corner_at_start = true;
    const Vec bottom{c[0], c[1] - r, 0.0}, right{c[0] + r, c[1], 0.0};
    return {arc, segment_piece(bottom, c, true), segment_piece(c, right, true)};
}

std::vector<Piece> pieces_of(const Domain& domain) {
    return std::visit(
        Overloaded{
            [](const Interval&) -> std::vector<Piece> { return {}; },
            [](const Ball&) -> std::vector<Piece> { return {}; },
            [](const Disc& d) -> std::vector<Piece> { return {circle_piece(d.center, d.radius, true)}; },
            [](const Annulus& a) -> std::vector<Piece> {
                return {circle_piece(a.center, a.r_outer, true), circle_piece(a.center, a.r_inner, false)};
            },
            [](const Triangle& t) -> std::vector<Piece> {
                const auto v = ccw_triangle(t);
                return {segment_piece(v[0], v[1], true), segment_piece(v[1], v[2], true),
                        segment_piece(v[2], v[0], true)};
            },
            [](const PacMan& pm) -> std::vector<Piece> {
                std::vector<Piece> out;
                for (Piece p : pacman_pieces(pm)) {
                    auto pos = p.position;
                    auto nrm = p.normal;
                    const Vec pivot = pm.center;
                    const double rot = pm.rotation;
                    p.position = [pos, pivot, rot](double t) { return rotate_about(pos(t), pivot, rot); };
                    p.normal = [nrm, rot](double t) { return rotate2(nrm(t), rot); };
                    out.push_back(p);
                }
                return out;
            },
            [](const Nephroid& n) -> std::vector<Piece> {
                std::vector<Piece> out;
                for (int half = 0; half < 2; ++half) {
                    Piece p;
                    p.position = [n](double t) { return rotate2(nephroid_point(t), n.rotation) + n.translation; };
                    p.normal = [n](double t) { return rotate2(nephroid_normal_local(t), n.rotation); };
                    p.t0 = half * kPi;
                    p.t1 = (half + 1) * kPi;
                    p.corner_at_start = true;
                    out.push_back(p);
                }
                return out;
            },
            [](const PolarRose& r) -> std::vector<Piece> {
                Piece p;
                p.position = [r](double phi) {
                    const double rad = rose_radius(phi);
                    return Vec{r.translation[0] + rad * std::cos(phi), r.translation[1] + rad * std::sin(phi), 0.0};
                };
                p.normal = [](double phi) { return rose_normal_local(phi); };
                p.t0 = 0.0;
                p.t1 = 2 * kPi;
                return {p};
            },
        },
        domain.shape());
}

void validate(const Shape& shape) {
    std::visit(Overloaded{
                   [](const Interval& s) {
                       if (!(s.a < s.b)) throw InputError("interval requires a < b");
                   },
                   [](const Disc& s) {
                       if (!(s.radius > 0)) throw InputError("disc radius must be positive");
                   },
                   [](const Ball& s) {
                       if (!(s.radius > 0)) throw InputError("ball radius must be positive");
                   },
                   [](const Annulus& s) {
                       if (!(s.r_inner > 0 && s.r_inner < s.r_outer))
                           throw InputError("annulus requires 0 < r_inner < r_outer");
                   },
                   [](const Triangle& t) {
                       const Vec e1 = t.v2 - t.v1, e2 = t.v3 - t.v1;
                       if (std::abs(e1[0] * e2[1] - e1[1] * e2[0]) < 1e-14)
                           throw InputError("triangle vertices are collinear");
                   },
                   [](const PacMan& s) {
                       if (!(s.radius > 0)) throw InputError("pacman radius must be positive");
                   },
                   [](const Nephroid&) {},
                   [](const PolarRose&) {},
               },
               shape);
}

}  // namespace

Vec rotate2(const Vec& p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]};
}

Vec rotate_about(const Vec& p, const Vec& pivot, double angle) { return rotate2(p - pivot, angle) + pivot; }

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
    validate(shape_);
    dim_ = std::visit(Overloaded{[](const Interval&) { return 1; }, [](const Ball&) { return 3; },
                                 [](const auto&) { return 2; }},
                      shape_);
}

std::string Domain::name() const {
    return std::visit(Overloaded{
                          [](const Interval&) { return std::string("interval"); },
                          [](const Disc&) { return std::string("disc"); },
                          [](const Ball&) { return std::string("ball"); },
                          [](const Annulus&) { return std::string("annulus"); },
                          [](const Triangle&) { return std::string("triangle"); },
                          [](const PacMan&) { return std::string("pacman"); },
                          [](const Nephroid&) { return std::string("nephroid"); },
                          [](const PolarRose&) { return std::string("rose"); },
                      },
                      shape_);
}

std::pair<Vec, Vec> Domain::bounding_box() const {
    return std::visit(
        Overloaded{
            [](const Interval& s) { return std::pair<Vec, Vec>{{s.a, 0, 0}, {s.b, 0, 0}}; },
            [](const Disc& s) {
                return std::pair<Vec, Vec>{{s.center[0] - s.radius, s.center[1] - s.radius, 0},
                                           {s.center[0] + s.radius, s.center[1] + s.radius, 0}};
            },
            [](const Ball& s) {
                return std::pair<Vec, Vec>{s.center - Vec{s.radius, s.radius, s.radius},
                                           s.center + Vec{s.radius, s.radius, s.radius}};
            },
            [](const Annulus& s) {
                return std::pair<Vec, Vec>{{s.center[0] - s.r_outer, s.center[1] - s.r_outer, 0},
                                           {s.center[0] + s.r_outer, s.center[1] + s.r_outer, 0}};
            },
            [](const Triangle& t) {
                Vec lo{std::min({t.v1[0], t.v2[0], t.v3[0]}), std::min({t.v1[1], t.v2[1], t.v3[1]}), 0};
                Vec hi{std::max({t.v1[0], t.v2[0], t.v3[0]}), std::max({t.v1[1], t.v2[1], t.v3[1]}), 0};
                return std::pair<Vec, Vec>{lo, hi};
            },
            [](const PacMan& s) {
                return std::pair<Vec, Vec>{{s.center[0] - s.radius, s.center[1] - s.radius, 0},
                                           {s.center[0] + s.radius, s.center[1] + s.radius, 0}};
            },
            [](const Nephroid& n) {
                // rotated local box [-0.354, 0.354] x [-0.5, 0.5] is contained in a 0.5-radius disc
                return std::pair<Vec, Vec>{{n.translation[0] - 0.5, n.translation[1] - 0.5, 0},
                                           {n.translation[0] + 0.5, n.translation[1] + 0.5, 0}};
            },
            [](const PolarRose& r) {
                const double rmax = 0.25 * std::exp(2.0 / std::exp(1.0));
                return std::pair<Vec, Vec>{{r.translation[0] - rmax, r.translation[1] - rmax, 0},
                                           {r.translation[0] + rmax, r.translation[1] + rmax, 0}};
            },
        },
        shape_);
}

double Domain::diameter() const {
    const auto [lo, hi] = bounding_box();
    return norm(hi - lo);
}

bool contains(const Domain& domain, const Vec& x) {
    return std::visit(
        Overloaded{
            [&](const Interval& s) { return x[0] > s.a && x[0] < s.b; },
            [&](const Disc& s) { return dist2(x, s.center) < s.radius * s.radius; },
            [&](const Ball& s) { return dist2(x, s.center) < s.radius * s.radius; },
            [&](const Annulus& s) {
                const double d2 = dist2(x, s.center);
                return d2 < s.r_outer * s.r_outer && d2 > s.r_inner * s.r_inner;
            },
            [&](const Triangle& t) {
                const auto v = ccw_triangle(t);
                for (int k = 0; k < 3; ++k) {
                    const Vec a = v[k], b = v[(k + 1) % 3];
                    const double cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
                    if (cross <= 0) return false;
                }
                return true;
            },
            [&](const PacMan& s) {
                const Vec p = rotate_about(x, s.center, -s.rotation);
                if (dist2(p, s.center) >= s.radius * s.radius) return false;
                const bool in_square = p[0] >= s.center[0] && p[1] <= s.center[1];
                return !in_square;
            },
            [&](const Nephroid& n) {
                const Vec p = rotate2(x - n.translation, -n.rotation);
                const double w = nephroid_half_width(p[1]);
                return w > 0 && std::abs(p[0]) < w;
            },
            [&](const PolarRose& r) {
                const Vec p = x - r.translation;
                const double rho = std::hypot(p[0], p[1]);
                return rho < rose_radius(std::atan2(p[1], p[0]));
            },
        },
        domain.shape());
}

bool contains(const Domain& domain, std::span<const double> x) {
    if (static_cast<int>(x.size()) != domain.dimension())
        throw InputError("point dimension " + std::to_string(x.size()) + " does not match domain dimension " +
                         std::to_string(domain.dimension()));
    Vec p{};
    std::copy(x.begin(), x.end(), p.begin());
    return contains(domain, p);
}

std::vector<BoundaryPoint> discretize_boundary(const Domain& domain, double h) {
    if (!(h > 0)) throw ConfigError("boundary spacing must be positive");
    if (h > domain.diameter()) throw ConfigError("boundary spacing exceeds the domain diameter");
    std::vector<BoundaryPoint> out;
    if (const auto* s = std::get_if<Interval>(&domain.shape())) {
        out.push_back({{s->a, 0, 0}, {-1, 0, 0}, s->a, false});
        out.push_back({{s->b, 0, 0}, {1, 0, 0}, s->b, false});
        return out;
    }
    if (const auto* b = std::get_if<Ball>(&domain.shape())) {
        // latitude bands with a golden-angle azimuth offset per band
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        const int bands = std::max(1, static_cast<int>(std::lround(kPi * b->radius / h)));
        int counter = 0;
        for (int k = 0; k <= bands; ++k) {
            const double theta = kPi * k / bands;
            const double ring = b->radius * std::sin(theta);
            const int count = std::max(1, static_cast<int>(std::lround(2 * kPi * ring / h)));
            for (int j = 0; j < count; ++j) {
                const double phi = golden * k + 2 * kPi * j / count;
                const Vec nrm{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
                out.push_back({b->center + b->radius * nrm, nrm, static_cast<double>(counter++), false});
            }
        }
        return out;
    }
    for (const Piece& p : pieces_of(domain)) march_piece(p, h, out);
    return out;
}

BoundaryNormal outward_normal(const Domain& domain, const Vec& b) {
    return std::visit(
        Overloaded{
            [&](const Interval& s) {
                return BoundaryNormal{{std::abs(b[0] - s.a) <= std::abs(b[0] - s.b) ? -1.0 : 1.0, 0, 0}, false};
            },
            [&](const Disc& s) { return BoundaryNormal{normalized(b - s.center), false}; },
            [&](const Ball& s) { return BoundaryNormal{normalized(b - s.center), false}; },
            [&](const Annulus& s) {
                const double r = dist(b, s.center);
                const Vec radial = normalized(b - s.center);
                const bool outer = std::abs(r - s.r_outer) <= std::abs(r - s.r_inner);
                return BoundaryNormal{outer ? radial : -1.0 * radial, false};
            },
            [&](const Triangle& t) {
                const auto v = ccw_triangle(t);
                for (int k = 0; k < 3; ++k)
                    if (dist(b, v[k]) < kCornerTol) return BoundaryNormal{edge_normal(v[k], v[(k + 1) % 3]), true};
                int best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (int k = 0; k < 3; ++k) {
                    const Vec n = edge_normal(v[k], v[(k + 1) % 3]);
                    const double d = std::abs(dot(b - v[k], n));
                    if (d < best_d) best_d = d, best = k;
                }
                return BoundaryNormal{edge_normal(v[best], v[(best + 1) % 3]), false};
            },
            [&](const PacMan& s) {
                const Vec p = rotate_about(b, s.center, -s.rotation);
                const Vec c = s.center;
                const Vec bottom{c[0], c[1] - s.radius, 0}, right{c[0] + s.radius, c[1], 0};
                Vec n;
                bool corner = false;
                if (dist(p, right) < kCornerTol) {
                    n = {1, 0, 0}, corner = true;  // arc starts at angle 0
                } else if (dist(p, bottom) < kCornerTol) {
                    n = {1, 0, 0}, corner = true;  // vertical edge starts here
                } else if (dist(p, c) < kCornerTol) {
                    n = {0, -1, 0}, corner = true;  // horizontal edge starts here
                } else if (std::abs(p[0] - c[0]) < kCornerTol && p[1] < c[1]) {
                    n = {1, 0, 0};
                } else if (std::abs(p[1] - c[1]) < kCornerTol && p[0] > c[0]) {
                    n = {0, -1, 0};
                } else {
                    n = normalized(p - c);
                }
                return BoundaryNormal{rotate2(n, s.rotation), corner};
            },
            [&](const Nephroid& nf) {
                const Vec p = rotate2(b - nf.translation, -nf.rotation);
                const double s = std::cbrt(2.0 * p[1]);
                const double c = std::copysign(std::sqrt(std::max(0.0, 1.0 - s * s)), p[0]);
                double t = std::atan2(s, c);
                if (t < 0) t += 2 * kPi;
                // cusps at local (+-0.25, 0); sin t itself is too noisy there after the cube root
                const bool corner = std::abs(p[1]) < kCornerTol && std::abs(std::abs(p[0]) - 0.25) < kCornerTol;
                if (corner) t = c > 0 ? 0.0 : kPi;
                return BoundaryNormal{rotate2(nephroid_normal_local(t), nf.rotation), corner};
            },
            [&](const PolarRose& r) {
                const Vec p = b - r.translation;
                return BoundaryNormal{rose_normal_local(std::atan2(p[1], p[0])), false};
            },
        },
        domain.shape());
}

Domain make_domain(const std::string& name) {
    if (name == "interval") return Domain(Interval{});
    if (name == "disc") return Domain(Disc{});
    if (name == "ball") return Domain(Ball{});
    if (name == "annulus") return Domain(Annulus{});
    if (name == "triangle") return Domain(Triangle{});
    if (name == "pacman") return Domain(PacMan{});
    if (name == "nephroid") return Domain(Nephroid{});
    if (name == "rose") return Domain(PolarRose{});
    throw ConfigError("unknown domain '" + name + "'");
}

std::vector<std::string> domain_names() {
    return {"interval", "disc", "ball", "annulus", "triangle", "pacman", "nephroid", "rose"};
}

}  // namespace stencil_lab
