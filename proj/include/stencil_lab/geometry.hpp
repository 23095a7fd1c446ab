#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stencil_lab/types.hpp"

namespace stencil_lab {

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

struct Disc {
    Vec center{0.5, 0.5, 0.0};
    double radius = 0.5;
};

struct Ball {
    Vec center{0.5, 0.5, 0.5};
    double radius = 0.5;
};

struct Annulus {
    Vec center{0.5, 0.5, 0.0};
    double r_inner = 0.1;
    double r_outer = 0.5;
};

struct Triangle {
    Vec v1{0.0, 0.0, 0.0};
    Vec v2{1.0, 0.0, 0.0};
    Vec v3{0.0, 1.0, 0.0};
};

/// Disc minus the axis-aligned square spanning [cx, cx+r] x [cy-r, cy], rotated about the centre.
struct PacMan {
    Vec center{0.5, 0.5, 0.0};
    double radius = 0.5;
    double rotation = kPi / 4;
};

/// x(t) = 0.75 cos t - 0.5 cos^3 t, y(t) = 0.5 sin^3 t, rotated about the origin, then translated.
struct Nephroid {
    double rotation = kPi / 4;
    Vec translation{0.5, 0.5, 0.0};
};

/// r(phi) = 0.25 |cos(1.5 phi)|^sin(3 phi) around `translation`.
struct PolarRose {
    Vec translation{0.5, 0.5, 0.0};
};

using Shape = std::variant<Interval, Disc, Ball, Annulus, Triangle, PacMan, Nephroid, PolarRose>;

/// Open domain described by a closed-form containment predicate and a parametric boundary.
class Domain {
public:
    explicit Domain(Shape shape);

    int dimension() const { return dim_; }
    const Shape& shape() const { return shape_; }
    std::string name() const;

    /// Axis-aligned bounding box (lo, hi).
    std::pair<Vec, Vec> bounding_box() const;
    double diameter() const;

private:
    Shape shape_;
    int dim_;
};

struct BoundaryPoint {
    Vec position{};
    Vec normal{};
    double arc_parameter = 0.0;
    bool corner = false;
};

struct BoundaryNormal {
    Vec normal{};
    bool corner = false;
};

bool contains(const Domain& domain, const Vec& x);
/// Checked overload: throws InputError when x.size() differs from the domain dimension.
bool contains(const Domain& domain, std::span<const double> x);

/// Samples the boundary at arc spacing close to h, each sample carrying its outward unit normal.
std::vector<BoundaryPoint> discretize_boundary(const Domain& domain, double h);

/// Analytic outward normal at a boundary point. Corners get the normal of the piece that
/// starts there (lower parameter value) and are flagged.
BoundaryNormal outward_normal(const Domain& domain, const Vec& b);

/// Named shapes used throughout the experiments: interval, disc, ball, annulus, triangle,
/// pacman, nephroid, rose.
Domain make_domain(const std::string& name);
std::vector<std::string> domain_names();

/// Rigid transforms used by the rotated shapes.
Vec rotate2(const Vec& p, double angle);
Vec rotate_about(const Vec& p, const Vec& pivot, double angle);

}  // namespace stencil_lab
