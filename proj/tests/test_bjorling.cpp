#include <cmath>

#include "doctest.h"
#include "isogrow/bjorling.hpp"
#include "isogrow/error.hpp"
#include "isogrow/harness.hpp"

using namespace isogrow;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an isogrow::Error");
    return ErrorCode::Io;
}

// U - V for the frame equation along xi.
Frame3 xi_generator(const CauchySample& s) {
    Frame3 m;
    m << 0, 2 * s.w, -s.k, -2 * s.w, 0, s.l, s.k, -s.l, 0;
    return m;
}

}  // namespace

TEST_CASE("cylinder Cauchy data is constant") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("cylinder", 1.0));
    for (double xi = -1.0; xi <= 1.0; xi += 0.125) {
        CauchySample s = cd.at(xi);
        CHECK(std::abs(s.u) < 1e-15);
        CHECK(std::abs(s.v) < 1e-15);
        CHECK(std::abs(s.w) < 1e-15);
        CHECK(std::abs(s.k + 1.0) < 1e-15);
        CHECK(std::abs(s.l) < 1e-15);
    }
}

TEST_CASE("sphere Cauchy data matches closed forms") {
    CauchyData cd = derive_cauchy_data(bjorling_catalog("sphere", 1.0));
    for (double xi = -1.0; xi <= 1.0; xi += 0.05) {
        CauchySample s = cd.at(xi);
        double sech = 1.0 / std::cosh(xi);
        CHECK(s.u == doctest::Approx(-std::log(std::cosh(xi))).epsilon(1e-13));
        CHECK(std::abs(s.v - 0.5 * std::tanh(-xi)) < 1e-13);
        CHECK(std::abs(s.w + 0.5 * std::tanh(-xi)) < 1e-13);
        CHECK(std::abs(s.k + sech) < 1e-13);
        CHECK(std::abs(s.l + sech) < 1e-13);
    }
}

TEST_CASE("frame and metric identities along the curve") {
    for (const char* name : {"cylinder", "sphere_mercator"}) {
        BjorlingData data = bjorling_catalog(name, 1.0);
        CauchyData cd = derive_cauchy_data(data);
        const double h = 1e-4;
        for (double xi = -0.9; xi <= 0.9; xi += 0.1) {
            CauchySample s = cd.at(xi);
            CHECK((s.Psi.transpose() * s.Psi - Frame3::Identity()).norm() < 1e-14);
            CHECK(std::abs(s.Psi.determinant() - 1.0) < 1e-14);
            CHECK(std::abs(2.0 * std::exp(2.0 * s.u) - data.df(xi).squaredNorm()) < 1e-13);
            CHECK((s.Psi.col(2) - data.n(xi)).norm() < 1e-15);
            // derivatives by central differences of the sampled data
            double du = (cd.u0(xi + h) - cd.u0(xi - h)) / (2 * h);
            CHECK(std::abs(du - 2.0 * s.v) < 1e-7);
            Frame3 dPsi = (cd.Psi0(xi + h) - cd.Psi0(xi - h)) / (2 * h);
            CHECK((dPsi - s.Psi * xi_generator(s)).norm() < 1e-7);
        }
    }
}

TEST_CASE("user curve: a straight line in a plane") {
    UserCurve uc;
    uc.r = 1.0;
    uc.f[0].poly = {0.0, 1.0};
    uc.f[1].poly = {0.0};
    uc.f[2].poly = {0.0};
    uc.g[2].poly = {1.0};
    CauchyData cd = derive_cauchy_data(user_bjorling(uc));
    for (double xi : {-0.7, 0.0, 0.4}) {
        CauchySample s = cd.at(xi);
        CHECK(s.u == doctest::Approx(-0.5 * std::log(2.0)));
        CHECK(std::abs(s.v) < 1e-12);
        CHECK(std::abs(s.w) < 1e-12);
        CHECK(std::abs(s.k) < 1e-12);
        CHECK(std::abs(s.l) < 1e-12);
    }
}

TEST_CASE("series derivatives") {
    Series s;
    s.poly = {1.0, -2.0, 0.5, 0.25};
    s.trig = {{2.0, 0.3, -0.7}};
    for (double t : {-0.8, 0.1, 0.9}) {
        const double h = 1e-5;
        CHECK(s.d1(t) == doctest::Approx((s.value(t + h) - s.value(t - h)) / (2 * h)).epsilon(1e-8));
        CHECK(s.d2(t) == doctest::Approx((s.d1(t + h) - s.d1(t - h)) / (2 * h)).epsilon(1e-8));
    }
}

TEST_CASE("invalid Cauchy data is rejected") {
    BjorlingData bad = bjorling_catalog("cylinder", 1.0);
    bad.df = [](double) { return Point3(0, 0, 0); };
    CHECK(code_of([&] { derive_cauchy_data(bad); }) == ErrorCode::DegenerateCurve);

    BjorlingData skew = bjorling_catalog("cylinder", 1.0);
    skew.n = [](double t) { return Point3(std::cos(t), std::sin(t), 1.0).normalized(); };
    CHECK(code_of([&] { derive_cauchy_data(skew); }) == ErrorCode::NonOrthogonal);

    BjorlingData nonunit = bjorling_catalog("cylinder", 1.0);
    nonunit.n = [](double t) { return Point3(2 * std::cos(t), 2 * std::sin(t), 0.0); };
    CHECK(code_of([&] { derive_cauchy_data(nonunit); }) == ErrorCode::NonOrthogonal);

    CHECK(code_of([] { bjorling_catalog("torus", 1.0); }) == ErrorCode::UnknownName);
    CHECK(canonical_surface_name("sphere-mercator") == "sphere_mercator");
    CHECK(canonical_surface_name("sphere") == "sphere_mercator");
}

TEST_CASE("initial strip reproduces the Cauchy data exactly") {
    for (const char* name : {"cylinder", "sphere_mercator"}) {
        BjorlingData data = bjorling_catalog(name, 1.0);
        CauchyData cd = derive_cauchy_data(data);
        for (double eps : {0.1, 0.05, 0.025}) {
            StripFidelity sf = strip_fidelity(cd, data, eps);
            CAPTURE(name);
            CAPTURE(eps);
            CHECK(sf.max_exact() < 1e-12);
        }
    }
}

TEST_CASE("strip positions converge at first order") {
    BjorlingData data = bjorling_catalog("sphere_mercator", 1.0);
    CauchyData cd = derive_cauchy_data(data);
    StripFidelity a = strip_fidelity(cd, data, 0.1), b = strip_fidelity(cd, data, 0.05),
                  c = strip_fidelity(cd, data, 0.025);
    for (auto [e1, e2] : {std::pair{a.e_f, b.e_f}, {b.e_f, c.e_f}, {a.e_fx, b.e_fx}, {b.e_fx, c.e_fx},
                          {a.e_fy, b.e_fy}, {b.e_fy, c.e_fy}}) {
        CHECK(e2 / e1 > 0.4);
        CHECK(e2 / e1 < 0.6);
    }
}

TEST_CASE("strip vertex count and placement") {
    BjorlingData data = bjorling_catalog("cylinder", 1.0);
    CauchyData cd = derive_cauchy_data(data);
    InitialStrip s = sample_initial_strip(cd, data, 0.1);
    // eta in {0, eps/4... } on vertices: rows m+n = 0 and m+n = 2 with |m|,|n| <= 20
    CHECK(s.spec.s_hi == 2);
    CHECK(s.positions.size() == 21 + 20);
    CHECK((s.positions.at({0, 0}) - data.f(0.0)).norm() < 1e-15);
}

TEST_CASE("strip rejects eps beyond the star bound") {
    // cylinder of radius 0.1: |k0| = 10, so eps * k0 leaves (-1, 1) for eps >= 0.1
    UserCurve uc;
    uc.r = 1.0;
    uc.f[0].trig = {{10.0, 0.1, 0.0}};
    uc.f[1].trig = {{10.0, 0.0, 0.1}};
    uc.f[2].poly = {0.0, -1.0};
    uc.g[0].trig = {{10.0, 1.0, 0.0}};
    uc.g[1].trig = {{10.0, 0.0, 1.0}};
    BjorlingData data = user_bjorling(uc);
    CauchyData cd = derive_cauchy_data(data);
    CHECK(std::abs(cd.k0(0.3) + 10.0) < 1e-9);
    CHECK(code_of([&] { sample_initial_strip(cd, data, 0.15); }) == ErrorCode::StarOverflow);
    CHECK_NOTHROW(sample_initial_strip(cd, data, 0.05));
    CHECK(code_of([&] { sample_initial_strip(cd, data, 1.0); }) == ErrorCode::InvalidDomain);
}
