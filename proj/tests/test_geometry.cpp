#include <cmath>
#include <random>

#include "doctest.h"
#include "isogrow/error.hpp"
#include "isogrow/geometry.hpp"

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

double orthonormality(const PlaneChart& c) {
    return std::max({std::abs(c.e1.dot(c.e2)), std::abs(c.e1.norm() - 1), std::abs(c.e2.norm() - 1),
                     (c.e1.cross(c.e2) - c.normal).norm()});
}

}  // namespace

TEST_CASE("plane_chart on canonical axes") {
    PlaneChart c = plane_chart({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    CHECK((c.e1 - Point3(1, 0, 0)).norm() < 1e-15);
    CHECK((c.e2 - Point3(0, 1, 0)).norm() < 1e-15);
    CHECK((c.normal - Point3(0, 0, 1)).norm() < 1e-15);
    CHECK((c.origin - Point3(0, 0, 0)).norm() == 0.0);
}

TEST_CASE("plane_chart rejects collinear triples") {
    CHECK(code_of([] { plane_chart({0, 0, 0}, {2, 0, 0}, {4, 0, 0}); }) == ErrorCode::CollinearInput);
}

TEST_CASE("plane_chart in the yz-plane is orthonormal") {
    PlaneChart c = plane_chart({0, 0, 0}, {0, 0, 3}, {0, 5, 1});
    CHECK(std::abs(std::abs(c.normal.x()) - 1.0) < 1e-12);
    CHECK(orthonormality(c) < 1e-12);
    CHECK((c.e1 - Point3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("to_complex on the canonical chart") {
    PlaneChart c = plane_chart({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    CHECK(std::abs(to_complex(c, {3, 4, 0}) - cplx(3, 4)) < 1e-15);
    CHECK(std::abs(to_complex(c, {0, 0, 0})) == 0.0);
    CHECK(code_of([&] { to_complex(c, {1, 1, 0.5}); }) == ErrorCode::OffPlane);
}

TEST_CASE("from_complex inverts to_complex") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int t = 0; t < 10; ++t) {
        Point3 p(U(rng), U(rng), U(rng)), q(U(rng), U(rng), U(rng)), r(U(rng), U(rng), U(rng));
        PlaneChart c = plane_chart(p, q, r);
        CHECK(orthonormality(c) < 1e-12);
        for (int k = 0; k < 100; ++k) {
            Point3 s = c.origin + U(rng) * c.e1 + U(rng) * c.e2;
            CHECK((from_complex(c, to_complex(c, s)) - s).norm() < 1e-14);
        }
    }
}

TEST_CASE("cross_ratio examples") {
    cplx q = cross_ratio({0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0});
    CHECK(std::abs(q - cplx(-1, 0)) < 1e-15);
    q = cross_ratio({0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1.2, 1.6, 0});
    CHECK(std::abs(q - cplx(-1, 0)) < 1e-12);
    CHECK(code_of([] { cross_ratio({0, 0, 0}, {2, 0, 0}, {2, 0, 0}, {0, 1, 0}); }) == ErrorCode::CoincidentPoints);
}

TEST_CASE("complete_conformal_square examples") {
    Point3 p4 = complete_conformal_square({Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0)}, 4);
    CHECK((p4 - Point3(0, 1, 0)).norm() < 1e-15);
    p4 = complete_conformal_square({Point3(0, 0, 0), Point3(2, 0, 0), Point3(2, 1, 0)}, 4);
    CHECK((p4 - Point3(1.2, 1.6, 0)).norm() < 1e-14);
    // opposite edge-length products agree: |p1-p2||p3-p4| = |p2-p3||p4-p1|
    CHECK(std::abs(2.0 * (Point3(2, 1, 0) - p4).norm() - 1.0 * p4.norm()) < 1e-14);
    CHECK(code_of([] { complete_conformal_square({Point3(0, 0, 0), Point3(1, 1, 1), Point3(2, 2, 2)}, 4); }) ==
          ErrorCode::CollinearInput);
}

TEST_CASE("check_quad examples") {
    QuadCheckReport r = check_quad({0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0});
    CHECK(r.is_conformal_square);
    CHECK(r.planarity_residual < 1e-14);
    CHECK(r.concyclicity_residual < 1e-14);
    CHECK(r.cr_residual < 1e-14);
    CHECK(r.cyclically_ordered);

    r = check_quad({0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0.1});
    CHECK_FALSE(r.is_conformal_square);
    // distance 0.1 over the diameter sqrt(2) of the known triple
    CHECK(r.planarity_residual == doctest::Approx(0.1 / std::sqrt(2.0)).epsilon(0.2));

    r = check_quad({0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0});
    CHECK_FALSE(r.is_conformal_square);
    // wrong cyclic order: concyclic points with a crossing quadruple
    r = check_quad({0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0});
    CHECK_FALSE(r.is_conformal_square);
}

TEST_CASE("completion yields conformal squares for random triples, any slot") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    int done = 0;
    while (done < 1000) {
        std::array<Point3, 3> t{Point3(U(rng), U(rng), U(rng)), Point3(U(rng), U(rng), U(rng)),
                                Point3(U(rng), U(rng), U(rng))};
        if (is_collinear(t[0], t[1], t[2], 1e-3)) continue;
        int slot = 1 + done % 4;
        Completion c = complete_with_cross_ratio(t, slot, cplx(-1, 0));
        if (c.condition > 1e6) continue;  // nearly degenerate; covered by the growth tests
        std::array<Point3, 4> q;
        for (int i = 0, k = 0; i < 4; ++i) q[i] = (i + 1 == slot) ? c.point : t[k++];
        QuadCheckReport r = check_quad(q[0], q[1], q[2], q[3]);
        CHECK(r.is_conformal_square);
        CHECK(r.cr_residual < 1e-10);
        CHECK(r.planarity_residual < 1e-10);
        CHECK(r.concyclicity_residual < 1e-10);
        CHECK(std::abs(cross_ratio(q[0], q[1], q[2], q[3]) - cplx(-1, 0)) < 1e-10);
        ++done;
    }
}

TEST_CASE("completion is similarity equivariant") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 200; ++t) {
        std::array<Point3, 3> k{Point3(U(rng), U(rng), U(rng)), Point3(U(rng), U(rng), U(rng)),
                                Point3(U(rng), U(rng), U(rng))};
        if (is_collinear(k[0], k[1], k[2], 1e-3)) continue;
        Eigen::Matrix3d R = Eigen::AngleAxisd(U(rng) * 3, Point3(U(rng), U(rng), U(rng)).normalized()).toRotationMatrix();
        double s = 0.5 + std::abs(U(rng)) * 3;
        Point3 b(U(rng), U(rng), U(rng));
        auto S = [&](const Point3& p) { return Point3(s * (R * p) + b); };
        for (int slot = 1; slot <= 4; ++slot) {
            Point3 direct = complete_conformal_square(k, slot);
            Point3 mapped = complete_conformal_square({S(k[0]), S(k[1]), S(k[2])}, slot);
            double scale = std::max({(k[0] - k[1]).norm(), (k[1] - k[2]).norm(), (k[0] - k[2]).norm()}) * s;
            CHECK((mapped - S(direct)).norm() < 1e-10 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("long double completion agrees with double") {
    std::array<Point3, 3> k{Point3(0.1, 0.2, 0.3), Point3(1.1, 0.1, 0.2), Point3(1.0, 1.3, 0.1)};
    std::array<Point3L, 3> kl{k[0].cast<long double>(), k[1].cast<long double>(), k[2].cast<long double>()};
    for (int slot = 1; slot <= 4; ++slot) {
        Point3 a = complete_conformal_square(k, slot);
        Point3 b = complete_with_cross_ratio(kl, slot, std::complex<long double>(-1, 0)).point.cast<double>();
        CHECK((a - b).norm() < 1e-14);
    }
}
