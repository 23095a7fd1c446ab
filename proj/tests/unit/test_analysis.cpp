#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "stencil_lab/analysis.hpp"
#include "stencil_lab/problems.hpp"

using namespace stencil_lab;

namespace {

struct DiscCase {
    SolutionEntry sol;
    ProblemSpec problem;
    NodeSet nodes;
};

DiscCase disc_problem(double h, const std::string& solution = "sin", BcLayout layout = BcLayout::DirichletAll) {
    const Domain d = make_domain("disc");
    const NodeSet raw = fill_advancing_front(d, discretize_boundary(d, h), h, 1);
    DiscCase out{find_solution(solution, 2), {d, {}, {}, {}}, {}};
    out.problem = make_problem(d, operator_registry("laplacian", 2), out.sol, layout);
    out.nodes = prepare_nodes(raw, out.problem);
    return out;
}

SweepOptions phs3(int m = 3) {
    SweepOptions o;
    o.kernel = RadialKernel::phs(1);
    o.m = m;
    return o;
}

void same_errors(const SweepRecord& a, const SweepRecord& b) {
    CHECK(a.n == b.n);
    CHECK(a.e_max_poiss == b.e_max_poiss);
    CHECK(a.e_avg_poiss == b.e_avg_poiss);
    CHECK(a.e_max_lap == b.e_max_lap);
    CHECK(a.e_avg_lap == b.e_avg_lap);
    CHECK(a.dN_poiss == b.dN_poiss);
    CHECK(a.dN_lap == b.dN_lap);
}

}  // namespace

TEST_SUITE("analysis") {
    TEST_CASE("sign balance examples") {
        const std::vector<double> pos = {1e-3, 2e-5, 4.0};
        CHECK(sign_balance(pos) == 1.0);
        const std::vector<double> mixed = {1, 2, 3, -1};
        CHECK(sign_balance(mixed) == 0.5);
        const std::vector<double> zeros = {0.0, 1.0, -1.0, -2.0};
        CHECK(sign_balance(zeros) == -0.25);
        const SignCounts c = sign_counts(zeros);
        CHECK(c.positive == 1);
        CHECK(c.negative == 2);
        CHECK(c.zero == 1);
        CHECK(sign_balance(std::vector<double>{}) == 0.0);
    }

    TEST_CASE("property: dN integer identity and bounds") {
        oracle::Gen gen(41);
        for (int t = 0; t < 500; ++t) {
            std::vector<double> e(static_cast<std::size_t>(gen.integer(1, 300)));
            for (double& v : e) {
                const int k = gen.integer(0, 4);
                v = k == 0 ? 0.0 : gen.uniform(-1, 1);
            }
            std::size_t p = 0, n = 0;
            for (double v : e) p += v > 0, n += v < 0;
            const double dn = sign_balance(e);
            CHECK(std::abs(dn) <= 1.0);
            CHECK(std::llround(dn * static_cast<double>(e.size())) ==
                  static_cast<long long>(p) - static_cast<long long>(n));
        }
    }

    TEST_CASE("error report aggregates are recomputable from the signed arrays") {
        DiscCase d = disc_problem(0.03);
        const SpatialIndex idx = build_index(d.nodes);
        std::vector<int> n_map(d.nodes.size(), 20);
        const auto st = stencils_all(idx, d.nodes, n_map);
        const GlobalSystem sys = assemble(d.problem, d.nodes, st, RadialKernel::phs(1), 3);
        const ErrorReport r = error_report(solve(sys), d.sol.u(), d.problem.rhs, sys.operator_weights, d.nodes);
        CHECK(r.n_int == d.nodes.interior_count());
        for (const auto* arr : {&r.e_poiss_signed, &r.e_lap_signed}) {
            double mx = 0, sum = 0;
            for (double v : *arr) mx = std::max(mx, std::abs(v)), sum += std::abs(v);
            const double avg = sum / static_cast<double>(arr->size());
            const bool poiss = arr == &r.e_poiss_signed;
            CHECK(mx == doctest::Approx(poiss ? r.e_poiss_max : r.e_lap_max).epsilon(1e-15));
            CHECK(avg == doctest::Approx(poiss ? r.e_poiss_avg : r.e_lap_avg).epsilon(1e-15));
            CHECK(mx >= avg);
            CHECK(avg >= 0);
        }
        CHECK(std::abs(r.dN_poiss) <= 1);
        CHECK(r.dN_poiss == sign_balance(r.e_poiss_signed));
    }

    TEST_CASE("disc sweep at n = 20 sits in the all-negative regime") {
        const DiscCase d = disc_problem(0.01);
        const auto recs = stencil_sweep(d.problem, d.nodes, 20, 20, phs3(), d.sol.u());
        REQUIRE(recs.size() == 1);
        CHECK_FALSE(recs[0].failed);
        CHECK(recs[0].dN_poiss == -1.0);
    }

    TEST_CASE("sweep bookkeeping and bit-identical reruns") {
        const DiscCase d = disc_problem(0.04);
        const auto a = stencil_sweep(d.problem, d.nodes, 10, 16, phs3(), d.sol.u());
        const auto b = stencil_sweep(d.problem, d.nodes, 10, 16, phs3(), d.sol.u());
        REQUIRE(a.size() == 7);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].n == 10 + static_cast<int>(i));
            same_errors(a[i], b[i]);
            CHECK(a[i].wall_time_s > 0);
        }
        const auto single = stencil_sweep(d.problem, d.nodes, 13, 13, phs3(), d.sol.u());
        REQUIRE(single.size() == 1);
        same_errors(single[0], a[3]);

        CHECK_THROWS_AS(stencil_sweep(d.problem, d.nodes, 9, 12, phs3(), d.sol.u()), ConfigError);
        CHECK_THROWS_AS(stencil_sweep(d.problem, d.nodes, 14, 12, phs3(), d.sol.u()), ConfigError);
    }

    TEST_CASE("region sweeps") {
        const DiscCase d = disc_problem(0.04);
        const auto base = stencil_sweep(d.problem, d.nodes, 12, 15, phs3(), d.sol.u());
        const auto none = region_sweep(d.problem, d.nodes, [](const Vec&) { return false; }, 28, 12, 15, phs3(), d.sol.u());
        for (std::size_t i = 0; i < base.size(); ++i) same_errors(base[i], none[i]);
        const auto all = region_sweep(d.problem, d.nodes, [](const Vec&) { return true; }, 14, 12, 15, phs3(), d.sol.u());
        // Every node pinned: the curve is flat at the n = 14 value.
        for (const SweepRecord& r : all) {
            CHECK(r.e_max_poiss == base[2].e_max_poiss);
            CHECK(r.dN_lap == base[2].dN_lap);
        }
    }

    TEST_CASE("multi_sweep matches separate sweeps") {
        const DiscCase a = disc_problem(0.04, "sin", BcLayout::MixedXGtHalf);
        const SolutionEntry u3 = find_solution("u3", 2);
        const ProblemSpec p3 = make_problem(a.problem.domain, a.problem.op, u3, BcLayout::MixedXGtHalf);
        const std::vector<SweepCase> cases = {{a.problem, a.sol.u()}, {p3, u3.u()}};
        const auto both = multi_sweep(cases, a.nodes, 10, 13, phs3());
        const auto sep = stencil_sweep(p3, a.nodes, 10, 13, phs3(), u3.u());
        for (std::size_t i = 0; i < sep.size(); ++i) {
            CHECK(both[1][i].e_max_poiss == doctest::Approx(sep[i].e_max_poiss).epsilon(1e-9));
            CHECK(both[1][i].dN_lap == sep[i].dN_lap);
        }
    }

    TEST_CASE("per-n failures are recorded without aborting") {
        const DiscCase d = disc_problem(0.04);
        SweepOptions o = phs3();
        o.weights.max_condition = 1.0;  // every local system now fails the gate
        const auto recs = stencil_sweep(d.problem, d.nodes, 10, 11, o, d.sol.u());
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].failed);
        CHECK(recs[1].failed);
        CHECK_FALSE(recs[0].error.empty());
    }

    TEST_CASE("convergence fits") {
        const std::vector<double> h = {0.04, 0.02, 0.01};
        std::vector<double> e2, e3;
        for (double v : h) e2.push_back(v * v), e3.push_back(7.5 * v * v * v);
        CHECK(std::abs(fit_convergence(h, e2).slope - 2.0) <= 1e-12);
        const ConvergenceFit f3 = fit_convergence(h, e3);
        CHECK(f3.slope == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(std::exp(f3.intercept) == doctest::Approx(7.5).epsilon(1e-10));
        CHECK(f3.r_squared == doctest::Approx(1.0));
        CHECK_THROWS_AS(fit_convergence(h, std::vector<double>{1, 0, 1}), InputError);
        CHECK_THROWS_AS(fit_convergence(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 2}), InputError);
    }

    TEST_CASE("IMEX indicator vanishes on polynomials of degree <= m_high") {
        const Domain dom = make_domain("disc");
        const NodeSet raw = fill_advancing_front(dom, discretize_boundary(dom, 0.04), 0.04, 2);
        // u = x^5 - 3 x^2 y^3 + y, exact f = 20 x^3 - 6 y^3 - 18 x^2 y.
        auto u = [](const Vec& x) { return std::pow(x[0], 5) - 3 * x[0] * x[0] * std::pow(x[1], 3) + x[1]; };
        auto f = [](const Vec& x) {
            return 20 * std::pow(x[0], 3) - 6 * std::pow(x[1], 3) - 18 * x[0] * x[0] * x[1];
        };
        ProblemSpec p{dom, operator_registry("laplacian", 2), f, {{[](const Vec&) { return true; }, Dirichlet{u}}}};
        const NodeSet nodes = prepare_nodes(raw, p);
        SolutionField exact;
        for (const Vec& x : nodes.positions) exact.values.push_back(u(x));
        ImexOptions o;
        o.m_high = 5;
        for (int n : {12, 30}) {
            const ImexResult r = imex_indicator(p, nodes, build_index(nodes), exact, RadialKernel::phs(1), n, o);
            CHECK(r.indicator.size() == nodes.interior_count());
            for (double v : r.indicator) CHECK(v <= 1e-8);
            CHECK(r.average <= 1e-8);
        }
        o.m_high = 0;
        CHECK_THROWS_AS(imex_indicator(p, nodes, build_index(nodes), exact, RadialKernel::phs(1), 12, o), ConfigError);
        NodeSet tiny;
        for (int i = 0; i < 10; ++i) tiny.push({0.3 + 0.04 * i, 0.5, 0}, NodeRole::Interior);
        o.m_high = 5;
        CHECK_THROWS_AS(imex_indicator(p, tiny, build_index(tiny), exact, RadialKernel::phs(1), 5, o), ConfigError);
    }

    TEST_CASE("extrema, contrast and slope changes") {
        const std::vector<double> v = {5, 3, 4, 1, 6, 6, 2};
        CHECK(local_extrema(v, true) == std::vector<std::size_t>{1, 3});
        CHECK(local_extrema(v, false) == std::vector<std::size_t>{2});
        CHECK(slope_sign_changes(v) == 4);  // - + - + (0 skipped) -
        const auto c = best_minimum_contrast(v);
        REQUIRE(c.has_value());
        CHECK(c->index == 3);
        CHECK(c->contrast == doctest::Approx(4.0));
        CHECK_FALSE(best_minimum_contrast(std::vector<double>{1, 2, 3}).has_value());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK(local_extrema(std::vector<double>{3, nan, 1, 2}, true).empty());
    }

    TEST_CASE("sweep CSV layout") {
        SweepRecord r;
        r.n = 28;
        r.e_max_poiss = 2.96e-5;
        std::ostringstream s;
        write_sweep_csv(s, std::vector<SweepRecord>{r});
        CHECK(s.str().rfind("n,e_max_poiss,e_avg_poiss,e_max_lap,e_avg_lap,dN_poiss,dN_lap,wall_time_s\n28,2.96e-05,", 0) == 0);
        r.imex_avg = 1.0;
        std::ostringstream t;
        write_sweep_csv(t, std::vector<SweepRecord>{r});
        CHECK(t.str().find(",wall_time_s,imex_avg\n") != std::string::npos);
    }
}
