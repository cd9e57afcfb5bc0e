#include "isogrow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

double diameter(std::initializer_list<const Point3*> pts) {
    double d = 0.0;
    for (auto i = pts.begin(); i != pts.end(); ++i)
        for (auto j = std::next(i); j != pts.end(); ++j) d = std::max(d, (**i - **j).norm());
    return d;
}

// Chart for a collinear triple: e1 along the line, e2 any fixed perpendicular.
PlaneChart line_chart(const Point3& p, const Point3& q, double scale) {
    PlaneChart c;
    c.origin = p;
    c.e1 = (q - p).normalized();
    Eigen::Index k;
    c.e1.cwiseAbs().minCoeff(&k);
    Point3 axis = Point3::Unit(k);
    c.e2 = (axis - axis.dot(c.e1) * c.e1).normalized();
    c.normal = c.e1.cross(c.e2);
    c.scale = scale;
    return c;
}

cplx chart_coord(const PlaneChart& c, const Point3& p) {
    Point3 d = p - c.origin;
    return {d.dot(c.e1), d.dot(c.e2)};
}

}  // namespace

bool is_collinear(const Point3& p, const Point3& q, const Point3& r, double tau) {
    double diam = diameter({&p, &q, &r});
    if (!(diam > 0.0)) return true;
    double area = 0.5 * (q - p).cross(r - p).norm();
    return !(area > tau * diam * diam);
}

PlaneChart plane_chart(const Point3& p, const Point3& q, const Point3& r) {
    if (is_collinear(p, q, r)) throw Error(ErrorCode::CollinearInput, "plane_chart: triple is collinear");
    PlaneChart c;
    c.origin = p;
    c.e1 = (q - p).normalized();
    Point3 d = r - p;
    c.e2 = (d - d.dot(c.e1) * c.e1).normalized();
    c.normal = c.e1.cross(c.e2);
    c.scale = diameter({&p, &q, &r});
    return c;
}

cplx to_complex(const PlaneChart& chart, const Point3& p) {
    double off = std::abs((p - chart.origin).dot(chart.normal));
    if (off > kTauPlane * chart.scale) throw Error(ErrorCode::OffPlane, "to_complex: point is not on the chart plane");
    return chart_coord(chart, p);
}

Point3 from_complex(const PlaneChart& chart, cplx z) {
    return chart.origin + z.real() * chart.e1 + z.imag() * chart.e2;
}

cplx cross_ratio(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4) {
    double diam = diameter({&p1, &p2, &p3, &p4});
    const Point3* pts[4] = {&p1, &p2, &p3, &p4};
    for (int i = 0; i < 4; ++i) {
        if (!((*pts[i] - *pts[(i + 1) % 4]).norm() > 1e-14 * diam))
            throw Error(ErrorCode::CoincidentPoints, "cross_ratio: consecutive points coincide");
    }
    PlaneChart c;
    if (!is_collinear(p1, p2, p3)) {
        c = plane_chart(p1, p2, p3);
    } else if (!is_collinear(p1, p2, p4)) {
        c = plane_chart(p1, p2, p4);
    } else {
        c = line_chart(p1, p2, diam);
    }
    c.scale = diam;
    cplx z1 = to_complex(c, p1), z2 = to_complex(c, p2), z3 = to_complex(c, p3), z4 = to_complex(c, p4);
    return (z1 - z2) / (z2 - z3) * (z3 - z4) / (z4 - z1);
}

namespace {

template <class S>
struct Solved {
    Eigen::Matrix<S, 3, 1> point;
    double condition;
};

template <class S>
Solved<S> solve_cross_ratio(const std::array<Eigen::Matrix<S, 3, 1>, 3>& known, int missing, std::complex<S> q) {
    using V = Eigen::Matrix<S, 3, 1>;
    using C = std::complex<S>;
    if (missing < 1 || missing > 4) throw Error(ErrorCode::WrongParity, "missing slot must be in 1..4");
    {
        Point3 a = known[0].template cast<double>(), b = known[1].template cast<double>(),
               c = known[2].template cast<double>();
        if (is_collinear(a, b, c)) throw Error(ErrorCode::CollinearInput, "completion: known triple is collinear");
    }
    const V o = known[0];
    const V e1 = (known[1] - o).normalized();
    V d = known[2] - o;
    const V e2 = (d - d.dot(e1) * e1).normalized();
    S scale = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) scale = std::max(scale, (known[i] - known[j]).norm());
    C z[5];
    for (int s = 1, k = 0; s <= 4; ++s)
        if (s != missing) {
            V r = known[k++] - o;
            z[s] = C(r.dot(e1), r.dot(e2));
        }
    C alpha, beta;
    switch (missing) {
        case 1:
            alpha = (z[3] - z[4]) + q * (z[2] - z[3]);
            beta = -z[2] * (z[3] - z[4]) - q * (z[2] - z[3]) * z[4];
            break;
        case 2:
            alpha = -(z[3] - z[4]) - q * (z[4] - z[1]);
            beta = z[1] * (z[3] - z[4]) + q * z[3] * (z[4] - z[1]);
            break;
        case 3:
            alpha = (z[1] - z[2]) + q * (z[4] - z[1]);
            beta = -(z[1] - z[2]) * z[4] - q * z[2] * (z[4] - z[1]);
            break;
        default:
            alpha = -(z[1] - z[2]) - q * (z[2] - z[3]);
            beta = (z[1] - z[2]) * z[3] + q * (z[2] - z[3]) * z[1];
            break;
    }
    Solved<S> out;
    S a = std::abs(alpha);
    if (a == S(0)) {
        out.point = V::Constant(std::numeric_limits<S>::quiet_NaN());
        out.condition = std::numeric_limits<double>::infinity();
        return out;
    }
    C zz = -beta / alpha;
    out.point = o + zz.real() * e1 + zz.imag() * e2;
    out.condition = static_cast<double>(scale / a);
    return out;
}

}  // namespace

Completion complete_with_cross_ratio(const std::array<Point3, 3>& known, int missing, cplx q) {
    auto s = solve_cross_ratio<double>(known, missing, q);
    return {s.point, s.condition};
}

CompletionL complete_with_cross_ratio(const std::array<Point3L, 3>& known, int missing, std::complex<long double> q) {
    auto s = solve_cross_ratio<long double>(known, missing, q);
    return {s.point, s.condition};
}

Point3 complete_conformal_square(const std::array<Point3, 3>& known, int missing) {
    return complete_with_cross_ratio(known, missing, cplx(-1.0, 0.0)).point;
}

QuadCheckReport check_quad(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4, double tol) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    QuadCheckReport rep;
    double diam = diameter({&p1, &p2, &p3, &p4});
    if (!(diam > 0.0) || is_collinear(p1, p2, p3)) {
        rep.concyclicity_residual = rep.cr_residual = rep.planarity_residual = inf;
        return rep;
    }
    Point3 a = p1 - p3, b = p2 - p3;
    Point3 axb = a.cross(b);
    Point3 center = p3 + (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) / (2.0 * axb.squaredNorm());
    double radius = (p1 - center).norm();
    rep.concyclicity_residual = std::abs((p4 - center).norm() - radius) / radius;

    Point3 normal = axb.normalized();
    rep.planarity_residual = std::abs((p4 - p1).dot(normal)) / diam;

    double lhs = (p1 - p2).norm() * (p3 - p4).norm();
    double rhs = (p2 - p3).norm() * (p4 - p1).norm();
    double big = std::max(lhs, rhs);
    rep.cr_residual = big > 0.0 ? std::abs(lhs - rhs) / big : inf;

    PlaneChart c = plane_chart(p1, p2, p3);
    cplx z1 = chart_coord(c, p1), z2 = chart_coord(c, p2), z3 = chart_coord(c, p3), z4 = chart_coord(c, p4);
    cplx den = (z2 - z3) * (z4 - z1);
    rep.cyclically_ordered = std::abs(den) > 0.0 && ((z1 - z2) * (z3 - z4) / den).real() < 0.0;

    rep.is_conformal_square = rep.cyclically_ordered && rep.concyclicity_residual < tol &&
                              rep.cr_residual < tol && rep.planarity_residual < tol;
    return rep;
}

}  // namespace isogrow
