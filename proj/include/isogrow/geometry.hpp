#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace isogrow {

using Point3 = Eigen::Vector3d;
using Point3L = Eigen::Matrix<long double, 3, 1>;
using Frame3 = Eigen::Matrix3d;  // columns are the frame vectors
using cplx = std::complex<double>;

inline constexpr double kTauColl = 1e-10;
inline constexpr double kTauPlane = 1e-9;
inline constexpr double kQuadTol = 1e-10;

struct PlaneChart {
    Point3 origin;
    Point3 e1, e2, normal;
    double scale = 1.0;  // diameter of the defining points
};

struct QuadCheckReport {
    double concyclicity_residual = 0.0;
    double cr_residual = 0.0;
    double planarity_residual = 0.0;
    bool cyclically_ordered = false;
    bool is_conformal_square = false;
};

// Throws CollinearInput when the triangle area is below kTauColl * diam^2.
PlaneChart plane_chart(const Point3& p, const Point3& q, const Point3& r);

bool is_collinear(const Point3& p, const Point3& q, const Point3& r, double tau = kTauColl);

cplx to_complex(const PlaneChart& chart, const Point3& p);
Point3 from_complex(const PlaneChart& chart, cplx z);

// (p1-p2)(p2-p3)^-1 (p3-p4)(p4-p1)^-1 in the chart of plane_chart(p1,p2,p3).
cplx cross_ratio(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4);

struct Completion {
    Point3 point;
    double condition = 0.0;  // diameter of the known triple over |leading coefficient|
};

// Fills slot `missing` (1..4) so that cross_ratio(p1,p2,p3,p4) = q.
// `known` lists the other three points in slot order.
Completion complete_with_cross_ratio(const std::array<Point3, 3>& known, int missing, cplx q);

// Extended-precision variant used by growth; same conventions.
struct CompletionL {
    Point3L point;
    double condition = 0.0;
};
CompletionL complete_with_cross_ratio(const std::array<Point3L, 3>& known, int missing, std::complex<long double> q);

Point3 complete_conformal_square(const std::array<Point3, 3>& known, int missing);

QuadCheckReport check_quad(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4,
                           double tol = kQuadTol);

}  // namespace isogrow
