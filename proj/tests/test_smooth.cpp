#include <cmath>
#include <random>

#include "doctest.h"
#include "isogrow/error.hpp"
#include "isogrow/smooth.hpp"

using namespace isogrow;

namespace {

std::vector<std::array<double, 2>> random_points(int n, double r, double h, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> X(-r, r), E(-h, h);
    std::vector<std::array<double, 2>> out;
    while ((int)out.size() < n) {
        double xi = X(rng), eta = E(rng);
        if (std::abs(xi) + std::abs(eta) > r) continue;
        out.push_back({xi + eta, eta - xi});
    }
    return out;
}

struct SolvedSphere {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("sphere_mercator", 1.0));
    GCHistory hist = solve_gc_cauchy(cd, 1.0, 0.3, 300);
    Reconstruction rec = reconstruct_surface(hist, anchor_from(cd));
};

const SolvedSphere& sphere() {
    static SolvedSphere s;
    return s;
}

}  // namespace

TEST_CASE("builtin surfaces satisfy the structure equations") {
    for (const char* name : {"cylinder", "sphere_mercator"}) {
        SmoothSurface s = builtin_surface(name);
        InvariantReport r = check_smooth_invariants(s, random_points(100, 1.0, 0.5, 1));
        CAPTURE(name);
        CHECK(r.max() < 1e-9);
    }
    CHECK_THROWS_AS(builtin_surface("torus"), Error);
}

TEST_CASE("sphere Gauss curvature") {
    SmoothSurface s = builtin_surface("sphere");
    const double d = 1e-3;
    for (auto [x, y] : random_points(100, 1.0, 0.5, 2)) {
        CHECK(std::abs(s.F(x, y).norm() - 1.0) < 1e-15);
        double sech = 1.0 / std::cosh(y);
        CHECK(s.k(x, y) * s.l(x, y) == doctest::Approx(sech * sech).epsilon(1e-14));
        // -(u_xx + u_yy) by second differences
        double lap = (s.u(x + d, y) + s.u(x - d, y) + s.u(x, y + d) + s.u(x, y - d) - 4 * s.u(x, y)) / (d * d);
        CHECK(std::abs(-lap - sech * sech) < 1e-6);
        // unit sphere: K = 1 means k l e^{-2u} = 1
        CHECK(s.k(x, y) * s.l(x, y) * std::exp(-2 * s.u(x, y)) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("GC solver keeps cylinder data constant") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("cylinder", 1.0));
    GCHistory h = solve_gc_cauchy(cd, 1.0, 0.3, 100);
    CHECK(h.steps() == 100);
    CHECK(h.d_eta() == doctest::Approx(0.003));
    // round-off grows away from the domain of dependence |xi| + |eta| <= r
    for (int j = -h.steps(); j <= h.steps(); j += 10)
        for (double xi = -1.0; xi <= 1.0; xi += 0.1) {
            if (std::abs(xi) + std::abs(h.eta(j)) > 0.98) continue;
            auto f = h.eval(j, xi);
            CHECK(std::abs(f[0]) < 1e-10);
            CHECK(std::abs(f[1]) < 1e-10);
            CHECK(std::abs(f[2] + 1.0) < 1e-10);
            CHECK(std::abs(f[3]) < 1e-10);
        }
}

TEST_CASE("GC solver odd step count is rounded up") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("cylinder", 1.0));
    CHECK(solve_gc_cauchy(cd, 1.0, 0.3, 7).steps() == 8);
}

TEST_CASE("GC solver reproduces the sphere inside the domain of dependence") {
    const GCHistory& h = sphere().hist;
    SmoothSurface ref = builtin_surface("sphere");
    double worst = 0.0;
    for (int j = -h.steps(); j <= h.steps(); j += 15)
        for (double xi = -1.0; xi <= 1.0; xi += 0.02) {
            double eta = h.eta(j);
            if (std::abs(xi) + std::abs(eta) > 0.98) continue;
            auto f = h.eval(j, xi);
            double x = xi + eta, y = eta - xi;
            worst = std::max({worst, std::abs(f[0] - ref.v(x, y)), std::abs(f[1] - ref.w(x, y)),
                              std::abs(f[2] - ref.k(x, y)), std::abs(f[3] - ref.l(x, y))});
        }
    CHECK(worst < 1e-6);
    // interpolation between levels
    auto g = h.eval_at(0.1, 0.1234);
    CHECK(std::abs(g[0] - ref.v(0.2234, 0.0234)) < 1e-6);
    GCState st = h.state(0, 65);
    CHECK(st.xi.size() == 65);
    CHECK(st.xi.front() == doctest::Approx(-1.0));
    CHECK(st.xi.back() == doctest::Approx(1.0));
}

TEST_CASE("GC solver flags blow-up of rough data") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> noise(201);
    for (auto& z : noise) z = N(rng);
    // piecewise linear interpolation of the noise samples
    auto rough = [&](double xi, int c) {
        double t = (xi + 1.0) * 50.0;
        int i = std::min(199, std::max(0, (int)std::floor(t)));
        double a = t - i;
        return (1 - a) * noise[(i + 37 * c) % 200] + a * noise[(i + 1 + 37 * c) % 200];
    };
    GCInit init = [&](double xi) {
        return std::array<double, 4>{rough(xi, 0), rough(xi, 1), rough(xi, 2) - 1.0, rough(xi, 3)};
    };
    bool blew = false;
    try {
        solve_gc_cauchy(init, 1.0, 0.3, 600);
    } catch (const Error& e) {
        blew = e.code() == ErrorCode::BlowUp;
    }
    CHECK(blew);
}

TEST_CASE("reconstruction of the sphere") {
    const SolvedSphere& s = sphere();
    SmoothSurface rec = s.rec.surface();
    SmoothSurface ref = builtin_surface("sphere");
    double worst = 0.0;
    for (auto [x, y] : random_points(200, 0.9, 0.3, 3)) worst = std::max(worst, (rec.F(x, y) - ref.F(x, y)).norm());
    CHECK(worst < 1e-5);
    const ReconstructDiagnostics& d = s.rec.diagnostics();
    CHECK(d.path_defect < 1e-8);
    CHECK(d.frame_drift < 1e-10);
    CHECK(d.det_drift < 1e-10);
    // grid nodes against the exact surface
    double node_err = 0.0;
    const auto& xs = s.rec.xi_nodes();
    const auto& es = s.rec.eta_levels();
    for (std::size_t j = 0; j < es.size(); j += 7)
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (std::abs(xs[i]) + std::abs(es[j]) > 0.98) continue;
            node_err = std::max(node_err, (s.rec.F_node(j, i) - ref.F(xs[i] + es[j], es[j] - xs[i])).norm());
        }
    CHECK(node_err < 1e-8);
}

TEST_CASE("reconstructed surface satisfies the structure equations") {
    SmoothSurface rec = sphere().rec.surface();
    InvariantReport r = check_smooth_invariants(rec, random_points(60, 0.8, 0.25, 4), 3e-3);
    CHECK(r.max() < 1e-6);
}

TEST_CASE("reconstruction of the cylinder is exact") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("cylinder", 1.0));
    Reconstruction rec = reconstruct_surface(solve_gc_cauchy(cd, 1.0, 0.3, 100), anchor_from(cd));
    SmoothSurface s = rec.surface();
    SmoothSurface ref = builtin_surface("cylinder");
    for (auto [x, y] : random_points(100, 1.0, 0.3, 5)) CHECK((s.F(x, y) - ref.F(x, y)).norm() < 1e-9);
}

TEST_CASE("reconstruction is equivariant under rotations") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("sphere", 1.0));
    GCHistory h = solve_gc_cauchy(cd, 1.0, 0.3, 100);
    Anchor a = anchor_from(cd);
    Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Point3(1, 2, 3).normalized()).toRotationMatrix();
    Anchor b = a;
    b.F = R * a.F + Point3(0.5, -1, 2);
    b.Psi = R * a.Psi;
    SmoothSurface sa = reconstruct_surface(h, a).surface(), sb = reconstruct_surface(h, b).surface();
    for (auto [x, y] : random_points(50, 0.9, 0.3, 6))
        CHECK((sb.F(x, y) - (R * sa.F(x, y) + Point3(0.5, -1, 2))).norm() < 1e-12);
}
