#include "isogrow/smooth.hpp"

#include <algorithm>
#include <cmath>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

SmoothSurface make_cylinder() {
    SmoothSurface s;
    s.name = "cylinder";
    s.F = [](double x, double y) { return Point3(std::cos(x), std::sin(x), y); };
    s.F_x = [](double x, double) { return Point3(-std::sin(x), std::cos(x), 0.0); };
    s.F_y = [](double, double) { return Point3(0.0, 0.0, 1.0); };
    s.N = [](double x, double) { return Point3(std::cos(x), std::sin(x), 0.0); };
    s.u = [](double, double) { return 0.0; };
    s.v = [](double, double) { return 0.0; };
    s.w = [](double, double) { return 0.0; };
    s.k = [](double, double) { return -1.0; };
    s.l = [](double, double) { return 0.0; };
    s.r = 10.0;
    s.h = 10.0;
    return s;
}

SmoothSurface make_sphere() {
    SmoothSurface s;
    s.name = "sphere_mercator";
    s.F = [](double x, double y) {
        double sy = 1.0 / std::cosh(y);
        return Point3(sy * std::cos(x), sy * std::sin(x), std::tanh(y));
    };
    s.F_x = [](double x, double y) {
        double sy = 1.0 / std::cosh(y);
        return Point3(-sy * std::sin(x), sy * std::cos(x), 0.0);
    };
    s.F_y = [](double x, double y) {
        double sy = 1.0 / std::cosh(y), ty = std::tanh(y);
        return Point3(-sy * ty * std::cos(x), -sy * ty * std::sin(x), sy * sy);
    };
    s.N = s.F;
    s.u = [](double, double y) { return -std::log(std::cosh(y)); };
    s.v = [](double, double y) { return 0.5 * std::tanh(y); };
    s.w = [](double, double y) { return -0.5 * std::tanh(y); };
    s.k = [](double, double y) { return -1.0 / std::cosh(y); };
    s.l = [](double, double y) { return -1.0 / std::cosh(y); };
    s.r = 3.0;
    s.h = 3.0;
    return s;
}

template <class T, class Fn>
T d4(Fn f, double t, double d) {
    return (f(t - 2 * d) - 8.0 * f(t - d) + 8.0 * f(t + d) - f(t + 2 * d)) / (12.0 * d);
}

}  // namespace

SmoothSurface builtin_surface(const std::string& name) {
    std::string n = canonical_surface_name(name);
    if (n == "cylinder") return make_cylinder();
    if (n == "sphere_mercator") return make_sphere();
    throw Error(ErrorCode::UnknownName, "no builtin smooth surface named '" + name + "'");
}

double InvariantReport::max() const {
    return std::max({conformality, curvature_line, gauss, codazzi, u_compat});
}

InvariantReport check_smooth_invariants(const SmoothSurface& s, const std::vector<std::array<double, 2>>& xy,
                                        double step) {
    InvariantReport rep;
    for (const auto& p : xy) {
        double x = p[0], y = p[1];
        Point3 fx = s.F_x(x, y), fy = s.F_y(x, y), n = s.N(x, y);
        double eu = std::exp(s.u(x, y));
        rep.conformality = std::max({rep.conformality, std::abs(fx.norm() - eu), std::abs(fy.norm() - eu),
                                     std::abs(fx.dot(fy))});

        Point3 fxy = d4<Point3>([&](double t) { return s.F_x(x, t); }, y, step);
        rep.curvature_line = std::max(rep.curvature_line, std::abs(fxy.dot(n)));

        double v = s.v(x, y), w = s.w(x, y), k = s.k(x, y), l = s.l(x, y);
        double ux = d4<double>([&](double t) { return s.u(t, y); }, x, step);
        double uy = d4<double>([&](double t) { return s.u(x, t); }, y, step);
        rep.u_compat = std::max({rep.u_compat, std::abs(ux - (v + w)), std::abs(uy - (w - v))});

        double uxx = d4<double>([&](double t) { return s.v(t, y) + s.w(t, y); }, x, step);
        double uyy = d4<double>([&](double t) { return s.w(x, t) - s.v(x, t); }, y, step);
        rep.gauss = std::max(rep.gauss, std::abs(-(uxx + uyy) - k * l));

        double ky = d4<double>([&](double t) { return s.k(x, t); }, y, step);
        double lx = d4<double>([&](double t) { return s.l(t, y); }, x, step);
        rep.codazzi = std::max({rep.codazzi, std::abs(ky - l * (w - v)), std::abs(lx - k * (w + v))});
    }
    return rep;
}

}  // namespace isogrow
