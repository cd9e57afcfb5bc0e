#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isogrow/error.hpp"
#include "isogrow/growth.hpp"
#include "isogrow/harness.hpp"
#include "isogrow/io.hpp"
#include "isogrow/quantities.hpp"
#include "isogrow/smooth.hpp"
#include "isogrow/transforms.hpp"

using namespace isogrow;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct Flags {
    std::string config, surface, out, kind, export_quantities, load, seed, eps_list;
    std::optional<double> eps, r, h, C;
};

struct Settings {
    std::string surface = "sphere_mercator";
    double eps = 0.05, r = 1.0, h = 0.3;
    std::vector<double> eps_list{0.1, 0.05, 0.025};
    std::string out, kind = "christoffel", export_quantities, load;
    std::optional<double> C;
    std::optional<Point3> seed;
    std::optional<Config> cfg;
};

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Config, what + ": cannot parse '" + s + "'");
        }
    }
    return out;
}

Settings resolve(const Flags& f) {
    Settings s;
    if (!f.config.empty()) {
        s.cfg = Config::load(f.config);
        const Config& c = *s.cfg;
        if (auto v = c.str("surface", "name")) s.surface = *v;
        if (auto v = c.num("surface", "r")) s.r = *v;
        if (auto v = c.num("lattice", "eps")) s.eps = *v;
        if (auto v = c.num("lattice", "r")) s.r = *v;
        if (auto v = c.num("lattice", "h")) s.h = *v;
        if (auto v = c.nums("lattice", "eps_list")) s.eps_list = *v;
        if (auto v = c.str("run", "out")) s.out = *v;
        if (auto v = c.str("run", "kind")) s.kind = *v;
        if (auto v = c.num("run", "C")) s.C = *v;
        if (auto v = c.str("run", "export_quantities")) s.export_quantities = *v;
        if (auto v = c.nums("run", "seed")) {
            if (v->size() != 3) throw Error(ErrorCode::Config, "run.seed needs three components");
            s.seed = Point3((*v)[0], (*v)[1], (*v)[2]);
        }
    }
    if (!f.surface.empty()) s.surface = f.surface;
    if (f.eps) s.eps = *f.eps;
    if (f.r) s.r = *f.r;
    if (f.h) s.h = *f.h;
    if (f.C) s.C = *f.C;
    if (!f.out.empty()) s.out = f.out;
    if (!f.kind.empty()) s.kind = f.kind;
    if (!f.export_quantities.empty()) s.export_quantities = f.export_quantities;
    if (!f.load.empty()) s.load = f.load;
    if (!f.eps_list.empty()) s.eps_list = parse_list(f.eps_list, "--eps-list");
    if (!f.seed.empty()) {
        auto v = parse_list(f.seed, "--seed");
        if (v.size() != 3) throw Error(ErrorCode::Config, "--seed needs x,y,z");
        s.seed = Point3(v[0], v[1], v[2]);
    }
    return s;
}

void check_lattice(const Settings& s) {
    if (!(s.r > 0)) throw Error(ErrorCode::InvalidDomain, "r must be positive");
    if (!(s.h > 0) || s.h > s.r) throw Error(ErrorCode::InvalidDomain, "h must satisfy 0 < h <= r");
    if (!(s.eps > 0) || !(s.eps < s.h))
        throw Error(ErrorCode::InvalidDomain, "eps must satisfy 0 < eps < h (got eps = " + std::to_string(s.eps) +
                                                  ", h = " + std::to_string(s.h) + ")");
}

BjorlingData bjorling_for(const Settings& s) {
    std::string name = canonical_surface_name(s.surface);
    if (name == "user") {
        if (!s.cfg) throw Error(ErrorCode::Config, "the user surface needs coefficient lists in a --config file");
        BjorlingData d = user_bjorling(user_curve_from_config(*s.cfg, s.r));
        return d;
    }
    return bjorling_catalog(name, s.r);
}

GrowthResult grow_surface(const Settings& s, const BjorlingData& data) {
    CauchyData cd = derive_cauchy_data(data);
    return grow(sample_initial_strip(cd, data, s.eps), s.h);
}

void log_growth(const GrowthResult& g) {
    std::printf("vertices: %zu\n", g.surface.positions.size());
    std::printf("quads: %zu\n", g.surface.complete_quads().size());
    std::printf("achieved_h: up %.6g down %.6g\n", g.achieved_h_up, g.achieved_h_down);
    for (const auto* stop : {&g.stop_up, &g.stop_down})
        if (*stop)
            std::printf("stopped: %s at quad %s\n", degeneracy_name((*stop)->kind), to_string((*stop)->center).c_str());
}

std::string stem(const std::string& path) {
    auto dot = path.rfind('.');
    auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

int cmd_grow(const Settings& s) {
    check_lattice(s);
    if (s.out.empty()) throw Error(ErrorCode::Config, "grow needs --out");
    GrowthResult g = grow_surface(s, bjorling_for(s));
    write_obj(g.surface, s.out);
    log_growth(g);
    std::printf("wrote: %s\n", s.out.c_str());
    if (!s.export_quantities.empty()) {
        write_quantities_csv(extract(g.surface), s.export_quantities);
        std::printf("wrote: %s\n", s.export_quantities.c_str());
    }
    return 0;
}

int cmd_transform(const Settings& s) {
    if (s.out.empty()) throw Error(ErrorCode::Config, "transform needs --out");
    if (s.kind != "christoffel" && s.kind != "darboux")
        throw Error(ErrorCode::Config, "--kind must be christoffel or darboux");
    if (s.kind == "darboux" && (!s.C || *s.C == 0.0 || !std::isfinite(*s.C)))
        throw Error(ErrorCode::InvalidDomain, "darboux needs a nonzero --C");
    DiscreteSurface base;
    if (!s.load.empty()) {
        base = read_obj(s.load);
        std::printf("loaded: %s (%zu vertices)\n", s.load.c_str(), base.positions.size());
    } else {
        check_lattice(s);
        GrowthResult g = grow_surface(s, bjorling_for(s));
        log_growth(g);
        base = std::move(g.surface);
    }
    if (s.kind == "christoffel") {
        std::printf("closedness: %.3e\n", christoffel_closedness(base));
        write_obj(christoffel_discrete(base), s.out);
    } else {
        Point3 f0 = base.positions.at({0, 0});
        Point3 seed = s.seed ? *s.seed : Point3(f0 + Point3(0.3, 0.2, 0.1));
        DarbouxResult d = darboux_discrete(base, seed, *s.C);
        std::printf("darboux: C %.6g seed %.6g,%.6g,%.6g\n", *s.C, seed.x(), seed.y(), seed.z());
        std::printf("cross-ratio defect: %.3e over %zu edges\n", d.audit.cr_defect, d.audit.edges);
        std::printf("loop defect: %.3e\n", d.audit.loop_defect);
        write_obj(d.surface, s.out);
        // per-edge audit: recomputed cross-ratio against its target
        std::string audit = "m,n,edge,q_re,q_im,target\n";
        double target = base.eps * base.eps / *s.C;
        char buf[192];
        d.surface.positions.for_each([&](LatticeIndex p, const Point3& fp) {
            for (int dir = 0; dir < 2; ++dir) {
                LatticeIndex p2 = dir == 0 ? LatticeIndex{p.m + 2, p.n} : LatticeIndex{p.m, p.n + 2};
                if (!d.surface.positions.has(p2)) continue;
                cplx q = cross_ratio(base.positions.at(p), base.positions.at(p2), d.surface.positions.at(p2), fp);
                std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%.17g,%.17g\n", p.m, p.n, dir == 0 ? "x" : "y",
                              q.real(), q.imag(), dir == 0 ? target : -target);
                audit += buf;
            }
        });
        std::string audit_path = stem(s.out) + "_audit.csv";
        write_file(audit_path, audit);
        std::printf("wrote: %s\n", audit_path.c_str());
    }
    std::printf("wrote: %s\n", s.out.c_str());
    return 0;
}

SmoothSurface reference_for(const Settings& s, const BjorlingData& data, double h) {
    std::string name = canonical_surface_name(s.surface);
    if (name != "user") return builtin_surface(name);
    CauchyData cd = derive_cauchy_data(data);
    int steps = std::max(2, int(std::ceil(h / 1e-3)));
    return reconstruct_surface(solve_gc_cauchy(cd, data.r, h, steps), anchor_from(cd)).surface();
}

int cmd_converge(const Settings& s) {
    if (s.out.empty()) throw Error(ErrorCode::Config, "converge needs --out (report prefix)");
    if (!(s.h > 0) || s.h > s.r) throw Error(ErrorCode::InvalidDomain, "h must satisfy 0 < h <= r");
    BjorlingData data = bjorling_for(s);
    ConvergenceReport rep = run_convergence(data, reference_for(s, data, s.h), s.eps_list, s.h);
    emit_report(rep, s.out);
    std::printf("%s", report_summary(rep).c_str());
    std::printf("wrote: %s.csv\nwrote: %s_summary.txt\n", s.out.c_str(), s.out.c_str());
    return 0;
}

int cmd_check(const Settings& s) {
    check_lattice(s);
    BjorlingData data = bjorling_for(s);
    CauchyData cd = derive_cauchy_data(data);
    GrowthResult g = grow(sample_initial_strip(cd, data, s.eps), s.h);
    log_growth(g);
    bool all = true;
    auto line = [&](const char* name, double value, double tol) {
        bool ok = value < tol;
        all = all && ok;
        std::printf("%s %-22s %.3e (tol %.0e)\n", ok ? "PASS" : "FAIL", name, value, tol);
    };
    double sq = 0.0;
    for (LatticeIndex c : g.surface.complete_quads()) {
        auto v = elementary_square(c);
        QuadCheckReport r = check_quad(g.surface.positions.at(v[0]), g.surface.positions.at(v[1]),
                                       g.surface.positions.at(v[2]), g.surface.positions.at(v[3]));
        sq = std::max({sq, r.planarity_residual, r.concyclicity_residual, r.cr_residual});
    }
    line("conformal_squares", sq, 1e-10);
    DiscreteQuantities q = extract(g.surface);
    line("gd1", gc_residuals(q).r_gd1, 1e-12);
    line("frame_relations", frame_relation_residuals(g.surface, q).max(), 1e-9);
    line("strip_exact", strip_fidelity(cd, data, s.eps).max_exact(), 1e-11);
    line("degenerate_triples", double(degeneracy_scan(g.surface).size()), 0.5);
    std::string name = canonical_surface_name(s.surface);
    if (name != "user") {
        std::vector<std::array<double, 2>> pts;
        for (int i = 0; i < 25; ++i) pts.push_back({-0.5 + 0.04 * i, 0.2 - 0.015 * i});
        line("smooth_invariants", check_smooth_invariants(builtin_surface(name), pts).max(), 1e-7);
    }
    return all ? 0 : kExitNumeric;
}

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidDomain:
        case ErrorCode::UnknownName:
        case ErrorCode::Config:
        case ErrorCode::Io:
        case ErrorCode::DegenerateCurve:
        case ErrorCode::NonOrthogonal:
            return kExitUsage;
        default:
            return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete isothermic surface growth, transforms and convergence studies"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "TOML-style config with [surface], [lattice], [run]");
        sub->add_option("--surface", f.surface, "cylinder, sphere_mercator or user");
        sub->add_option("--eps", f.eps, "lattice spacing");
        sub->add_option("--r", f.r, "half-width of the data curve interval");
        sub->add_option("--h", f.h, "target height");
        sub->add_option("--out", f.out, "output path (prefix for converge)");
    };
    CLI::App* grow_cmd = app.add_subcommand("grow", "grow a discrete surface and export OBJ");
    common(grow_cmd);
    grow_cmd->add_option("--export-quantities", f.export_quantities, "write discrete quantities CSV");
    CLI::App* tr = app.add_subcommand("transform", "Christoffel or Darboux transform");
    common(tr);
    tr->add_option("--kind", f.kind, "christoffel or darboux");
    tr->add_option("--C", f.C, "Darboux parameter");
    tr->add_option("--seed", f.seed, "Darboux seed x,y,z");
    tr->add_option("--load", f.load, "transform a previously exported OBJ");
    CLI::App* conv = app.add_subcommand("converge", "convergence study against the smooth reference");
    common(conv);
    conv->add_option("--eps-list", f.eps_list, "comma-separated eps values");
    CLI::App* chk = app.add_subcommand("check", "run invariant suites");
    common(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    try {
        Settings s = resolve(f);
        if (grow_cmd->parsed()) return cmd_grow(s);
        if (tr->parsed()) return cmd_transform(s);
        if (conv->parsed()) return cmd_converge(s);
        return cmd_check(s);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
