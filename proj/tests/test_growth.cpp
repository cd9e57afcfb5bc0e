#include <cmath>

#include "doctest.h"
#include "isogrow/error.hpp"
#include "isogrow/growth.hpp"
#include "support.hpp"

using namespace isogrow;
using testing_support::full_position;
using testing_support::grown;

namespace {

InitialStrip strip(const char* name, double eps) {
    BjorlingData data = bjorling_catalog(name, 1.0);
    return sample_initial_strip(derive_cauchy_data(data), data, eps);
}

std::size_t rows_vertices(const DomainSpec& d) {
    std::size_t n = 0;
    for (int m = -d.k_r; m <= d.k_r; ++m)
        for (int k = -d.k_r; k <= d.k_r; ++k)
            if (slot_of({m, k}) == Slot::Vertex && d.contains({m, k})) ++n;
    return n;
}

}  // namespace

TEST_CASE("full growth fills the domain with conformal squares") {
    for (const char* name : {"cylinder", "sphere_mercator"}) {
        const GrowthResult& g = grown(name, 0.05);
        CAPTURE(name);
        CHECK_FALSE(g.stop_up.has_value());
        CHECK_FALSE(g.stop_down.has_value());
        CHECK(g.achieved_h() == doctest::Approx(0.3));
        CHECK(g.surface.positions.size() == rows_vertices(g.surface.spec));
        CHECK(g.surface.positions.size() == 840);
        std::size_t quads = 0;
        double worst = 0.0;
        for (LatticeIndex c : g.surface.complete_quads()) {
            auto sq = elementary_square(c);
            Point3 p[4];
            for (int i = 0; i < 4; ++i) p[i] = full_position(g.surface, sq[i]);
            QuadCheckReport r = check_quad(p[0], p[1], p[2], p[3]);
            CHECK(r.is_conformal_square);
            worst = std::max({worst, r.cr_residual, r.planarity_residual, r.concyclicity_residual});
            ++quads;
        }
        CHECK(quads == 759);
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("vertex count over the rows") {
    // rows m+n = 2s for s = -11..12 hold 41 - |s| vertices
    std::size_t expect = 0;
    for (int s = -11; s <= 12; ++s) expect += 41 - std::abs(s);
    CHECK(expect == 840);
}

TEST_CASE("a collinear lower triple stops upward growth at its center") {
    InitialStrip s = strip("sphere_mercator", 0.05);
    Point3 mid = 0.5 * (s.positions.at({2, 0}) + s.positions.at({0, 2}));
    s.set({0, 0}, mid);
    GrowthResult g = grow(s, 0.3);
    REQUIRE(g.stop_up.has_value());
    CHECK(g.stop_up->center == LatticeIndex{1, 1});
    CHECK(g.stop_up->kind == DegeneracyKind::LowerTriple);
    CHECK(g.achieved_h_up == doctest::Approx(0.025));
    CHECK(g.achieved_h() == doctest::Approx(0.025));
    // the failed row is not committed
    CHECK_FALSE(g.surface.positions.has({2, 2}));
    CHECK_FALSE(g.surface.positions.has({0, 4}));

    std::vector<Degeneracy> d = degeneracy_scan(s);
    REQUIRE_FALSE(d.empty());
    bool found = false;
    for (const auto& x : d) found = found || (x.center == LatticeIndex{1, 1} && x.kind == DegeneracyKind::LowerTriple);
    CHECK(found);
    // every reported triple touches the moved vertex
    for (const auto& x : d) {
        auto sq = elementary_square(x.center);
        bool touches = false;
        for (auto v : sq) touches = touches || v == LatticeIndex{0, 0};
        CHECK(touches);
    }
}

TEST_CASE("target at the strip height leaves the strip unchanged") {
    InitialStrip s = strip("sphere_mercator", 0.1);
    GrowthResult g = grow(s, 0.05);
    CHECK(g.achieved_h() == doctest::Approx(0.05));
    CHECK(g.surface.positions.size() == s.positions.size());
    s.positions.for_each([&](LatticeIndex i, const Point3& p) { CHECK((g.surface.positions.at(i) - p).norm() == 0.0); });
}

TEST_CASE("degeneracy scan") {
    CHECK(degeneracy_scan(grown("sphere_mercator", 0.1).surface).empty());
    CHECK(degeneracy_scan(DiscreteSurface(DomainSpec::make(1.0, 0.3, 0.1))).empty());
    CHECK(std::string(degeneracy_name(DegeneracyKind::UpperTriple)).size() > 0);
}

TEST_CASE("growth is deterministic") {
    GrowthResult a = grow(strip("sphere_mercator", 0.1), 0.3);
    GrowthResult b = grow(strip("sphere_mercator", 0.1), 0.3);
    REQUIRE(a.surface.positions.size() == b.surface.positions.size());
    a.surface.positions.for_each([&](LatticeIndex i, const Point3& p) {
        CHECK(p == b.surface.positions.at(i));
        CHECK(full_position(a.surface, i) == full_position(b.surface, i));
    });
}

TEST_CASE("achieved height is monotone in the target") {
    double prev = 0.0;
    for (double h : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        GrowthResult g = grow(strip("sphere_mercator", 0.1), h);
        CHECK(g.achieved_h() >= prev);
        CHECK(g.achieved_h() <= h + 1e-12);
        prev = g.achieved_h();
    }
    CHECK_THROWS_AS(grow(strip("sphere_mercator", 0.1), 1.5), Error);
}

TEST_CASE("achieved height never exceeds the target") {
    // with eps = 0.09 the rows do not land on eta = +-0.3
    GrowthResult g = grow(strip("sphere_mercator", 0.09), 0.3);
    CHECK_FALSE(g.stop_up.has_value());
    CHECK_FALSE(g.stop_down.has_value());
    CHECK(g.achieved_h_up == doctest::Approx(0.27));
    CHECK(g.achieved_h_down <= 0.3);
    CHECK(g.achieved_h_down > 0.27);
}
