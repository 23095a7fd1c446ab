#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "stencil_lab/nodegen.hpp"

using namespace stencil_lab;

namespace {

NodeSet af(const std::string& name, double h, std::uint64_t seed, double factor = AdvancingFrontOptions{}.spacing_factor) {
    const Domain d = make_domain(name);
    AdvancingFrontOptions o;
    o.spacing_factor = factor;
    return fill_advancing_front(d, discretize_boundary(d, h), h, seed, o);
}

std::vector<Vec> non_ghost(const NodeSet& ns) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns.roles[i] != NodeRole::Ghost) out.push_back(ns.positions[i]);
    return out;
}

// Fill distance by brute force over a regular probe grid; underestimates by at most half a cell diagonal.
double grid_fill_distance(const NodeSet& ns, const Domain& dom, int per_axis) {
    const auto pts = non_ghost(ns);
    const auto [lo, hi] = dom.bounding_box();
    double rho = 0;
    for (int i = 0; i <= per_axis; ++i)
        for (int j = 0; j <= per_axis; ++j) {
            const Vec x{lo[0] + (hi[0] - lo[0]) * i / per_axis, lo[1] + (hi[1] - lo[1]) * j / per_axis, 0};
            if (!contains(dom, x)) continue;
            double best = INFINITY;
            for (const Vec& p : pts) best = std::min(best, oracle::distance(p, x));
            rho = std::max(rho, best);
        }
    return rho;
}

const std::vector<std::string> kShapes2d = {"disc", "annulus", "triangle", "pacman", "nephroid", "rose"};

}  // namespace

TEST_SUITE("nodegen") {
    TEST_CASE("1D advancing front degenerates to the uniform grid") {
        const NodeSet ns = af("interval", 0.25, 1);
        std::vector<double> xs;
        for (const Vec& p : ns.positions) xs.push_back(p[0]);
        std::sort(xs.begin(), xs.end());
        REQUIRE(xs.size() == 5);
        for (int i = 0; i < 5; ++i) CHECK(xs[static_cast<std::size_t>(i)] == doctest::Approx(0.25 * i).epsilon(1e-12));
    }

    TEST_CASE("disc node count at the 0.9 spacing factor lies in [7500, 9500]") {
        for (std::uint64_t seed : {1, 2, 3}) {
            const NodeSet ns = af("disc", 0.01, seed, 0.9);
            INFO("seed ", seed);
            CHECK(ns.size() >= 7500);
            CHECK(ns.size() <= 9500);
        }
    }

    TEST_CASE("disc node count at the default spacing factor follows the area density") {
        // Interior density of a front advanced at spacing ~h sits between a square grid (1/h^2)
        // and 0.75 of it; the boundary adds circumference / h.
        const double area = kPi * 0.25, h = 0.01;
        for (std::uint64_t seed : {1, 2, 3}) {
            const NodeSet ns = af("disc", h, seed);
            const double interior = static_cast<double>(ns.interior_count());
            INFO("seed ", seed, " interior ", interior);
            CHECK(interior >= 0.75 * area / (h * h));
            CHECK(interior <= 1.0 * area / (h * h));
            CHECK(std::abs(static_cast<double>(ns.size() - ns.interior_count()) - 2 * kPi * 0.5 / h) <= 1.0);
        }
    }

    TEST_CASE("property: spacing guarantee and quasi-uniformity on every 2D shape x 10 seeds") {
        const double h = 0.02;
        for (const std::string& name : kShapes2d) {
            const Domain dom = make_domain(name);
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const NodeSet ns = af(name, h, seed);
                INFO(name, " seed ", seed);
                CHECK(oracle::min_pair_distance(non_ghost(ns)) >= 0.9 * h);
                CHECK(quality(ns, dom, 128).gamma <= 2.0);
            }
        }
    }

    TEST_CASE("property: every interior node passes contains() for every generator") {
        for (const std::string& name : kShapes2d) {
            const Domain dom = make_domain(name);
            const auto b = discretize_boundary(dom, 0.02);
            const NodeSet a = fill_advancing_front(dom, b, 0.02, 5);
            const NodeSet hs = fill_halton(dom, b, a.interior_count());
            for (const NodeSet* ns : {&a, &hs})
                for (std::size_t i = 0; i < ns->size(); ++i)
                    if (ns->roles[i] == NodeRole::Interior) CHECK(contains(dom, ns->positions[i]));
            CHECK(hs.interior_count() == a.interior_count());
        }
        const Domain disc = make_domain("disc");
        const NodeSet p = fill_polar(disc, 0.02, 3);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p.roles[i] == NodeRole::Interior) CHECK(contains(disc, p.positions[i]));
        const Domain ball = make_domain("ball");
        const NodeSet b3 = fill_advancing_front(ball, discretize_boundary(ball, 0.1), 0.1, 1);
        CHECK(b3.interior_count() > 0);
        for (std::size_t i = 0; i < b3.size(); ++i)
            if (b3.roles[i] == NodeRole::Interior) CHECK(contains(ball, b3.positions[i]));
        CHECK(oracle::min_pair_distance(b3.positions) >= 0.9 * 0.1);
    }

    TEST_CASE("boundary nodes lie on the boundary") {
        const NodeSet ns = af("disc", 0.02, 1);
        for (std::size_t i = 0; i < ns.size(); ++i)
            if (is_boundary(ns.roles[i])) CHECK(std::abs(oracle::distance(ns.positions[i], {0.5, 0.5, 0}) - 0.5) < 1e-9);
        const NodeSet an = af("annulus", 0.02, 1);
        for (std::size_t i = 0; i < an.size(); ++i)
            if (is_boundary(an.roles[i])) {
                const double r = oracle::distance(an.positions[i], {0.5, 0.5, 0});
                CHECK(std::min(std::abs(r - 0.5), std::abs(r - 0.1)) < 1e-9);
            }
    }

    TEST_CASE("determinism and seed sensitivity") {
        const NodeSet a = af("disc", 0.02, 11), b = af("disc", 0.02, 11), c = af("disc", 0.02, 12);
        CHECK(a.positions == b.positions);
        CHECK(a.roles == b.roles);
        CHECK(a.positions != c.positions);
        CHECK(quality(c, make_domain("disc"), 128).gamma <= 2.0);
        CHECK(oracle::min_pair_distance(c.positions) >= 0.9 * 0.02);
    }

    TEST_CASE("too thin a domain yields a flagged boundary-only set") {
        const Domain d(Annulus{{0.5, 0.5, 0}, 0.49, 0.5});
        const NodeSet ns = fill_advancing_front(d, discretize_boundary(d, 0.05), 0.05, 1);
        CHECK(ns.boundary_only);
        CHECK(ns.interior_count() == 0);
    }

    TEST_CASE("Halton radical inverses") {
        CHECK(radical_inverse(1, 2) == 0.5);
        CHECK(radical_inverse(2, 2) == 0.25);
        CHECK(radical_inverse(3, 2) == 0.75);
        CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3).epsilon(1e-15));
        CHECK(radical_inverse(2, 3) == doctest::Approx(2.0 / 3).epsilon(1e-15));
        const Vec p = halton_point(1, 3);
        CHECK(p[0] == 0.5);
        CHECK(p[1] == doctest::Approx(1.0 / 3));
        CHECK(p[2] == doctest::Approx(0.2));
    }

    TEST_CASE("Halton fill is worse conditioned than the advancing front at equal count") {
        const Domain dom = make_domain("disc");
        const auto b = discretize_boundary(dom, 0.01);
        const NodeSet a = fill_advancing_front(dom, b, 0.01, 1);
        const NodeSet hs = fill_halton(dom, b, a.interior_count());
        CHECK(hs.size() == a.size());
        CHECK(quality(hs, dom, 128).gamma > quality(a, dom, 128).gamma);
    }

    TEST_CASE("polar rings") {
        const Domain dom = make_domain("disc");
        const NodeSet ns = fill_polar(dom, 0.25, 0);
        std::size_t centre = 0, ring = 0, boundary = 0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double r = oracle::distance(ns.positions[i], {0.5, 0.5, 0});
            if (ns.roles[i] != NodeRole::Interior) {
                ++boundary;
                continue;
            }
            if (r < 1e-12) ++centre;
            else if (std::abs(r - 0.25) < 1e-12) ++ring;
        }
        CHECK(centre == 1);
        CHECK(ring == 7);
        CHECK(ns.interior_count() == 8);
        CHECK(boundary == discretize_boundary(dom, 0.25).size());

        for (std::uint64_t seed : {0, 4}) {
            const NodeSet fine = fill_polar(dom, 0.03, seed);
            for (std::size_t i = 0; i < fine.size(); ++i) {
                if (fine.roles[i] != NodeRole::Interior) continue;
                const double r = oracle::distance(fine.positions[i], {0.5, 0.5, 0});
                CHECK(std::abs(r - 0.03 * std::round(r / 0.03)) < 1e-12);
            }
        }
        CHECK_THROWS_AS(fill_polar(make_domain("triangle"), 0.1), InputError);
    }

    TEST_CASE("polar count is within 15% of the advancing-front count") {
        const Domain dom = make_domain("disc");
        const double polar = static_cast<double>(fill_polar(dom, 0.01, 0).size());
        for (double factor : {0.9, AdvancingFrontOptions{}.spacing_factor}) {
            const double front = static_cast<double>(af("disc", 0.01, 1, factor).size());
            INFO("factor ", factor, " polar ", polar, " front ", front);
            CHECK(std::abs(polar - front) <= 0.15 * front);
        }
    }

    TEST_CASE("quality on analytically forced sets") {
        NodeSet grid;
        grid.dim = 1;
        const double h = 0.1;
        for (int i = 0; i <= 10; ++i) grid.push({i * h, 0, 0}, i == 0 || i == 10 ? NodeRole::DirichletBoundary : NodeRole::Interior);
        const QualityMetrics q = quality(grid, make_domain("interval"), 128);
        CHECK(q.rho == doctest::Approx(h / 2).epsilon(1e-6));
        CHECK(q.delta == doctest::Approx(h).epsilon(1e-12));
        CHECK(q.gamma == doctest::Approx(0.5).epsilon(1e-6));

        NodeSet two;
        two.push({0.5, 0.5, 0}, NodeRole::Interior);
        two.push({0.51, 0.5, 0}, NodeRole::Interior);
        CHECK(quality(two, make_domain("disc"), 16).delta == doctest::Approx(0.01).epsilon(1e-12));

        NodeSet one;
        one.push({0.5, 0.5, 0}, NodeRole::Interior);
        CHECK_THROWS_AS(quality(one, make_domain("disc"), 16), InputError);
    }

    TEST_CASE("fill distance agrees with a brute-force probe grid") {
        const Domain dom = make_domain("disc");
        const NodeSet ns = af("disc", 0.05, 2);
        const int per_axis = 500;
        const double grid = grid_fill_distance(ns, dom, per_axis);
        const double est = quality(ns, dom, 128).rho;
        const double half_cell = 0.5 * std::sqrt(2.0) / per_axis;
        CHECK(est >= grid - 1e-12);
        CHECK(est <= grid + half_cell);
    }

    TEST_CASE("property: fill distance is probe-converged within 5%") {
        for (const std::string& name : kShapes2d) {
            const Domain dom = make_domain(name);
            const NodeSet ns = af(name, 0.02, 4);
            const double a = quality(ns, dom, 64).rho, b = quality(ns, dom, 128).rho;
            INFO(name, " ", a, " vs ", b);
            CHECK(std::abs(a - b) <= 0.05 * b);
        }
    }

    TEST_CASE("node CSV round-trips bit for bit") {
        NodeSet ns = af("disc", 0.05, 9);
        ns.push({1.05, 0.5, 0}, NodeRole::Ghost, {1, 0, 0});
        std::stringstream s;
        write_nodes_csv(s, ns);
        const std::string text = s.str();
        CHECK(text.rfind("x,y,role,nx,ny\n", 0) == 0);
        const NodeSet back = read_nodes_csv(s);
        CHECK(back.positions == ns.positions);
        CHECK(back.roles == ns.roles);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            CHECK(back.normals[i][0] == ns.normals[i][0]);
            CHECK(back.normals[i][1] == ns.normals[i][1]);
        }
        for (NodeRole r : {NodeRole::Interior, NodeRole::DirichletBoundary, NodeRole::NeumannBoundary,
                           NodeRole::RobinBoundary, NodeRole::Ghost})
            CHECK(parse_role(role_name(r)) == r);
    }
}
