#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "stencil_lab/experiment.hpp"
#include "stencil_lab/reference_data.hpp"

namespace stencil_lab {

namespace fs = std::filesystem;

namespace {

constexpr auto kEmax = &SweepRecord::e_max_poiss;

struct Ctx {
    std::string preset;
    fs::path dir;
    std::uint64_t seed;
    PresetReport report;

    ExperimentConfig disc(const std::string& name) const {
        ExperimentConfig c;
        c.name = name;
        c.domain = "disc";
        c.h = 0.01;
        c.seed = seed;
        c.kernel = "phs3";
        c.m = 3;
        c.n_min = 10;
        c.n_max = 69;
        c.output = dir.string();
        return c;
    }

    RunResult run_config(const ExperimentConfig& c) {
        RunResult r = run(c);
        report.files.insert(report.files.end(), r.files.begin(), r.files.end());
        return r;
    }

    void check(const std::string& name, bool passed, const std::string& detail) {
        report.checks.push_back({name, passed, detail});
    }
};

std::string list_ns(std::span<const SweepRecord> recs, bool minima) {
    const auto v = column(recs, kEmax);
    std::string s;
    for (std::size_t i : local_extrema(v, minima)) s += (s.empty() ? "" : ",") + std::to_string(recs[i].n);
    return s.empty() ? "none" : s;
}

std::string describe_extrema(std::span<const SweepRecord> recs) {
    return "minima at n=" + list_ns(recs, true) + "; maxima at n=" + list_ns(recs, false);
}

const SweepRecord* at_n(std::span<const SweepRecord> recs, int n) {
    for (const SweepRecord& r : recs)
        if (r.n == n) return &r;
    return nullptr;
}

// Local extrema structure of the reference disc sweep, optionally widened by `slack`.
bool disc_structure(std::span<const SweepRecord> recs, int slack) {
    return has_extremum_in(recs, kEmax, false, 15 - slack, 19 + slack) &&
           has_extremum_in(recs, kEmax, true, 26 - slack, 30 + slack) &&
           has_extremum_in(recs, kEmax, true, 44 - slack, 48 + slack);
}

void check_oscillates(Ctx& ctx, const std::string& label, std::span<const SweepRecord> recs) {
    const int changes = slope_sign_changes(column(recs, kEmax));
    ctx.check(label + ": e_max_poiss oscillates", changes >= 2,
              std::to_string(changes) + " slope sign changes; " + describe_extrema(recs));
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(3) << v;
    return s.str();
}

bool within_factor(double a, double b, double f) { return a > 0 && b > 0 && a <= f * b && b <= f * a; }

// Sign-balance pattern around the first two minima.
void check_sign_pattern(Ctx& ctx, std::span<const SweepRecord> recs) {
    bool neg = true, pos = true, split = false;
    std::string detail;
    for (const SweepRecord& r : recs) {
        if (r.n >= 17 && r.n <= 27 && !(r.dN_poiss <= -0.95)) neg = false, detail += " n=" + std::to_string(r.n) + ":" + fmt(r.dN_poiss);
        if (r.n >= 29 && r.n <= 45 && !(r.dN_poiss >= 0.95)) pos = false, detail += " n=" + std::to_string(r.n) + ":" + fmt(r.dN_poiss);
        if (r.n >= 27 && r.n <= 29 && std::abs(r.dN_poiss) < 0.95) split = true;
    }
    ctx.check("dN_poiss sign pattern (-1 on 17..27, +1 on 29..45, split near 28)", neg && pos && split,
              detail.empty() ? "all within band" : "outside band:" + detail);
}

void preset_fig2(Ctx& ctx) {
    const RunResult r = ctx.run_config(ctx.disc(ctx.preset));
    const auto& recs = r.records;
    ctx.check("local max of e_max_poiss in [15,19]", has_extremum_in(recs, kEmax, false, 15, 19), describe_extrema(recs));
    ctx.check("local min of e_max_poiss in [26,30]", has_extremum_in(recs, kEmax, true, 26, 30), describe_extrema(recs));
    ctx.check("local max of e_max_poiss in [32,36]", has_extremum_in(recs, kEmax, false, 32, 36), describe_extrema(recs));
    ctx.check("local min of e_max_poiss in [44,48]", has_extremum_in(recs, kEmax, true, 44, 48), describe_extrema(recs));
    const SweepRecord* r28 = at_n(recs, 28);
    ctx.check("e_max_poiss(28) < 1e-4", r28 && r28->e_max_poiss < 1e-4, r28 ? fmt(r28->e_max_poiss) : "missing");
    check_sign_pattern(ctx, recs);
}

void preset_table(Ctx& ctx) {
    const RunResult r = ctx.run_config(ctx.disc(ctx.preset));
    const auto& ref = reference_disc_sweep();
    const fs::path p = ctx.dir / (ctx.preset + "_compare.csv");
    std::ofstream out(p);
    out << "n,e_max_poiss,ref_e_max_poiss,e_avg_poiss,ref_e_avg_poiss,e_max_lap,ref_e_max_lap,e_avg_lap,ref_e_avg_lap,"
           "within_factor_3\n"
        << std::setprecision(10);
    int rows_all = 0, rows_emax = 0;
    std::array<int, 4> per_column{};
    for (const ReferenceRow& row : ref) {
        const SweepRecord* rec = at_n(r.records, row.n);
        if (!rec) continue;
        const std::array<double, 4> ours{rec->e_max_poiss, rec->e_avg_poiss, rec->e_max_lap, rec->e_avg_lap};
        const std::array<double, 4> theirs{row.e_max_poiss, row.e_avg_poiss, row.e_max_lap, row.e_avg_lap};
        bool all = true;
        for (int k = 0; k < 4; ++k) {
            const bool ok = within_factor(ours[k], theirs[k], 3.0);
            per_column[k] += ok;
            all = all && ok;
        }
        rows_all += all;
        rows_emax += within_factor(ours[0], theirs[0], 3.0);
        out << row.n;
        for (int k = 0; k < 4; ++k) out << ',' << ours[k] << ',' << theirs[k];
        out << ',' << (all ? 1 : 0) << '\n';
    }
    ctx.report.files.push_back(p.string());
    std::ostringstream detail;
    detail << rows_all << "/60 rows within factor 3 in all columns (e_max_poiss " << per_column[0] << ", e_avg_poiss "
           << per_column[1] << ", e_max_lap " << per_column[2] << ", e_avg_lap " << per_column[3] << ")";
    ctx.check("e_max_poiss within factor 3 of the reference on every row", rows_emax == 60, detail.str());
    bool key_rows = true;
    for (int n : {17, 28, 46}) {
        const SweepRecord* rec = at_n(r.records, n);
        key_rows = key_rows && rec && within_factor(rec->e_max_poiss, ref[static_cast<std::size_t>(n - 10)].e_max_poiss, 3.0);
    }
    ctx.check("e_max_poiss at n=17, 28, 46 within factor 3", key_rows, "");
}

void preset_fig5(Ctx& ctx) {
    ExperimentConfig c = ctx.disc(ctx.preset);
    c.mode = RunMode::Convergence;
    c.h_list = {0.04, 0.02, 0.01, 0.005};
    for (int n = 34; n <= 46; ++n) c.n_list.push_back(n);
    const RunResult r = ctx.run_config(c);
    for (std::size_t j = 0; j < c.n_list.size(); ++j) {
        const int n = c.n_list[j];
        if (n != 34 && n != 40 && n != 46) continue;
        const double p = r.fits[j].slope;
        ctx.check("convergence order at n=" + std::to_string(n) + " in [1.6, 2.4]", p >= 1.6 && p <= 2.4,
                  "p = " + fmt(p));
    }
}

void preset_fig6(Ctx& ctx) {
    std::ofstream q(ctx.dir / (ctx.preset + "_quality.csv"));
    q << "generator,index,nodes,rho,delta,gamma\n" << std::setprecision(10);
    double af_gamma_max = 0.0;
    bool af_ok = true, polar_ok = true;
    std::string af_detail, polar_detail;
    for (int k = 0; k < 10; ++k) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_af_" + std::to_string(k));
        c.seed = ctx.seed + static_cast<std::uint64_t>(k);
        const RunResult r = ctx.run_config(c);
        const auto& s = r.node_sets.front();
        af_gamma_max = std::max(af_gamma_max, s.quality.gamma);
        q << "advancing_front," << k << ',' << s.total << ',' << s.quality.rho << ',' << s.quality.delta << ','
          << s.quality.gamma << '\n';
        if (!disc_structure(r.records, 2)) af_ok = false, af_detail += " set " + std::to_string(k) + ": " + describe_extrema(r.records) + ";";
    }
    for (int k = 0; k < 10; ++k) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_polar_" + std::to_string(k));
        c.generator = "polar";
        c.seed = static_cast<std::uint64_t>(k);  // seed 0 keeps the rings aligned
        const RunResult r = ctx.run_config(c);
        const auto& s = r.node_sets.front();
        q << "polar," << k << ',' << s.total << ',' << s.quality.rho << ',' << s.quality.delta << ',' << s.quality.gamma
          << '\n';
        if (!disc_structure(r.records, 2)) polar_ok = false, polar_detail += " set " + std::to_string(k) + ": " + describe_extrema(r.records) + ";";
    }
    double halton_gamma_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_halton_" + std::to_string(k));
        c.generator = "halton";
        c.halton_skip = 20 + 10000 * static_cast<std::uint64_t>(k);
        const RunResult r = ctx.run_config(c);
        const auto& s = r.node_sets.front();
        halton_gamma_min = std::min(halton_gamma_min, s.quality.gamma);
        q << "halton," << k << ',' << s.total << ',' << s.quality.rho << ',' << s.quality.delta << ',' << s.quality.gamma
          << '\n';
    }
    ctx.report.files.push_back((ctx.dir / (ctx.preset + "_quality.csv")).string());
    ctx.check("advancing-front sets keep the extremum locations (+-2)", af_ok, af_ok ? "10/10" : af_detail);
    ctx.check("polar sets keep the extremum locations (+-2)", polar_ok, polar_ok ? "10/10" : polar_detail);
    ctx.check("every Halton gamma exceeds every advancing-front gamma", halton_gamma_min > af_gamma_max,
              "min Halton gamma " + fmt(halton_gamma_min) + ", max advancing-front gamma " + fmt(af_gamma_max));
}

void preset_fig7(Ctx& ctx) {
    const RunResult base = ctx.run_config(ctx.disc(ctx.preset + "_unfixed"));
    ExperimentConfig outer = ctx.disc(ctx.preset + "_boundary_fixed");
    outer.region = "outside_radius:0.4";
    outer.n_fixed = 28;
    const RunResult fixed_outer = ctx.run_config(outer);
    ExperimentConfig inner = ctx.disc(ctx.preset + "_interior_fixed");
    inner.region = "inside_radius:0.4";
    inner.n_fixed = 28;
    const RunResult fixed_inner = ctx.run_config(inner);

    double worst = 1.0;
    for (std::size_t i = 0; i < base.records.size(); ++i) {
        const double a = base.records[i].e_max_poiss, b = fixed_outer.records[i].e_max_poiss;
        worst = std::max(worst, std::max(a / b, b / a));
    }
    ctx.check("boundary region fixed at n=28 stays within factor 2 of the unfixed curve", worst <= 2.0,
              "largest ratio " + fmt(worst));
    auto spread = [](const std::vector<SweepRecord>& recs) {
        const auto v = column(recs, kEmax);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo;
    };
    const double s_base = spread(base.records), s_inner = spread(fixed_inner.records);
    ctx.check("interior fixed at n=28 flattens the curve", s_inner < s_base,
              "max/min spread " + fmt(s_inner) + " vs unfixed " + fmt(s_base));
}

void preset_fig8(Ctx& ctx) {
    const std::vector<std::pair<std::string, std::vector<int>>> combos = {
        {"phs3", {2, 3, 4}}, {"phs5", {2, 3, 4}}, {"tps2", {2, 3}}, {"tps4", {2, 3}}};
    for (const auto& [kernel, ms] : combos) {
        for (int m : ms) {
            ExperimentConfig c = ctx.disc(ctx.preset + "_" + kernel + "_m" + std::to_string(m));
            c.kernel = kernel;
            c.m = m;
            c.n_min = std::max(10, static_cast<int>(monomial_count(m, 2)));
            const RunResult r = ctx.run_config(c);
            check_oscillates(ctx, kernel + " m=" + std::to_string(m), r.records);
        }
    }
}

void preset_fig9(Ctx& ctx) {
    for (const std::string family : {"gauss", "mq", "imq"}) {
        std::vector<std::vector<SweepRecord>> curves;
        for (const std::string eps : {"1", "0.1"}) {
            ExperimentConfig c = ctx.disc(ctx.preset + "_" + family + "_eps" + eps);
            c.kernel = family + ":" + eps;
            c.max_condition = std::numeric_limits<double>::infinity();
            curves.push_back(ctx.run_config(c).records);
        }
        check_oscillates(ctx, family + " eps=1", curves[0]);
        double largest = 1.0;
        for (std::size_t i = 0; i < curves[0].size(); ++i) {
            const double a = curves[0][i].e_max_poiss, b = curves[1][i].e_max_poiss;
            if (a > 0 && b > 0 && std::isfinite(a) && std::isfinite(b)) largest = std::max(largest, std::max(a / b, b / a));
        }
        ctx.check(family + " eps=0.1 departs from eps=1 by more than factor 3 somewhere", largest > 3.0,
                  "largest ratio " + fmt(largest) + "; eps=0.1 " + describe_extrema(curves[1]));
    }
}

void preset_dimensions(Ctx& ctx, const std::string& bc) {
    struct Case {
        std::string domain;
        double h;
        int m_poly_min;
        int n_max;
    };
    const std::vector<Case> cases = {{"interval", 0.01, 4, 100}, {"disc", 0.01, 10, 120}, {"ball", 0.04, 20, 120}};
    for (const Case& cs : cases) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_" + cs.domain);
        c.domain = cs.domain;
        c.h = cs.h;
        c.bc = bc;
        c.n_min = cs.m_poly_min;
        c.n_max = cs.n_max;
        const RunResult r = ctx.run_config(c);
        check_oscillates(ctx, cs.domain, r.records);
        if (bc == "mixed_x_gt_half" && cs.domain == "disc") {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const SweepRecord& rec : r.records) {
                if (rec.n >= 26 && rec.n <= 30 && has_extremum_in(r.records, kEmax, true, rec.n, rec.n))
                    lo = std::min(lo, rec.e_max_poiss);
                if (rec.n >= 15 && rec.n <= 19 && has_extremum_in(r.records, kEmax, false, rec.n, rec.n))
                    hi = std::max(hi, rec.e_max_poiss);
            }
            ctx.check("disc: minimum in [26,30] at least 3x below maximum in [15,19]", std::isfinite(lo) && hi >= 3 * lo,
                      "min " + fmt(lo) + ", max " + fmt(hi));
        }
    }
}

void preset_fig12(Ctx& ctx) {
    for (const std::string domain : {"nephroid", "triangle", "pacman", "annulus", "rose"}) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_" + domain);
        c.domain = domain;
        check_oscillates(ctx, domain, ctx.run_config(c).records);
    }
}

void preset_fig13(Ctx& ctx) {
    for (const std::string op : {"L1", "L2", "L3", "L4", "L5"}) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_" + op);
        c.op = op;
        const RunResult r = ctx.run_config(c);
        ctx.check(op + ": local min of e_max_poiss in [26,30]", has_extremum_in(r.records, kEmax, true, 26, 30),
                  describe_extrema(r.records));
    }
}

void preset_fig14(Ctx& ctx) {
    for (const std::string u : {"u1", "u2", "u3", "u4", "u5", "u6"}) {
        ExperimentConfig c = ctx.disc(ctx.preset + "_" + u);
        c.solution = u;
        check_oscillates(ctx, u, ctx.run_config(c).records);
    }
}

void preset_fig15lite(Ctx& ctx) {
    ExperimentConfig c = ctx.disc(ctx.preset);
    c.domain = "ball";
    c.h = 0.04;
    c.m = 2;
    c.bc = "heatsink_lite";
    c.imex = true;
    c.m_high = 4;
    c.n_min = 10;
    c.n_max = 100;
    const RunResult r = ctx.run_config(c);
    const auto best = best_minimum_contrast(column(r.records, &SweepRecord::imex_avg));
    ctx.check("IMEX average has a local minimum with >= 3x contrast", best && best->contrast >= 3.0,
              best ? "n=" + std::to_string(r.records[best->index].n) + ", contrast " + fmt(best->contrast)
                   : "no local minimum with a neighbouring maximum");
}

const std::map<std::string, std::function<void(Ctx&)>>& registry() {
    static const std::map<std::string, std::function<void(Ctx&)>> table = {
        {"fig2", preset_fig2},
        {"tableA2", preset_table},
        {"fig5", preset_fig5},
        {"fig6", preset_fig6},
        {"fig7", preset_fig7},
        {"fig8", preset_fig8},
        {"fig9", preset_fig9},
        {"fig10", [](Ctx& c) { preset_dimensions(c, "dirichlet_all"); }},
        {"fig11", [](Ctx& c) { preset_dimensions(c, "mixed_x_gt_half"); }},
        {"fig12", preset_fig12},
        {"fig13", preset_fig13},
        {"fig14", preset_fig14},
        {"fig15lite", preset_fig15lite},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig2", "tableA2", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14",
            "fig15lite"};
}

PresetReport repro(const std::string& preset, const std::string& out_dir, std::uint64_t seed) {
    const auto it = registry().find(preset);
    if (it == registry().end()) {
        std::string known;
        for (const std::string& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
        throw ConfigError("unknown preset '" + preset + "' (available: " + known + ")");
    }
    Ctx ctx{preset, fs::path(out_dir), seed, {}};
    ctx.report.preset = preset;
    fs::create_directories(ctx.dir);
    it->second(ctx);

    nlohmann::ordered_json summary;
    summary["preset"] = preset;
    summary["seed"] = seed;
    summary["version"] = library_version();
    summary["passed"] = ctx.report.all_passed();
    summary["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : ctx.report.checks)
        summary["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    summary["files"] = ctx.report.files;
    const fs::path p = ctx.dir / (preset + "_summary.json");
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    out << summary.dump(2) << '\n';
    ctx.report.files.push_back(p.string());
    return ctx.report;
}

}  // namespace stencil_lab
