#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "isogrow/geometry.hpp"
#include "isogrow/lattice.hpp"

namespace isogrow {

using CurveFn = std::function<Point3(double)>;

struct BjorlingData {
    std::string name;
    double r = 1.0;
    CurveFn f, n, df, dn;
    CurveFn d2f;  // optional; finite differences of df are used when empty
};

struct CauchySample {
    double u = 0, v = 0, w = 0, k = 0, l = 0;
    Frame3 Psi = Frame3::Identity();
};

class CauchyData {
public:
    CauchyData(BjorlingData data, double fd_step);

    CauchySample at(double xi) const;
    double u0(double xi) const { return at(xi).u; }
    double v0(double xi) const { return at(xi).v; }
    double w0(double xi) const { return at(xi).w; }
    double k0(double xi) const { return at(xi).k; }
    double l0(double xi) const { return at(xi).l; }
    Frame3 Psi0(double xi) const { return at(xi).Psi; }

    const BjorlingData& data() const { return data_; }
    double r() const { return data_.r; }

private:
    Point3 second_derivative(double xi) const;

    BjorlingData data_;
    double fd_step_;
};

// Checks the data on a sample grid; throws DegenerateCurve or NonOrthogonal.
CauchyData derive_cauchy_data(const BjorlingData& data, double fd_step = 1e-3);

// Vertex data on Omega(r, eps/2).
struct InitialStrip : DiscreteSurface {
    using DiscreteSurface::DiscreteSurface;
};

InitialStrip sample_initial_strip(const CauchyData& cd, const BjorlingData& data, double eps);

// sum_k poly[k] xi^k + sum_j (a_j cos(w_j xi) + b_j sin(w_j xi)), trig entries are (w, a, b).
struct Series {
    std::vector<double> poly;
    std::vector<std::array<double, 3>> trig;

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
};

// Curve f and an auxiliary field g; the normal is g with its tangential part removed, normalized.
struct UserCurve {
    double r = 1.0;
    std::array<Series, 3> f;
    std::array<Series, 3> g;
};

BjorlingData user_bjorling(const UserCurve& spec);

// "cylinder" or "sphere_mercator" (hyphenated spellings accepted), diagonal traces F(xi,-xi).
BjorlingData bjorling_catalog(const std::string& name, double r);

std::string canonical_surface_name(const std::string& name);

}  // namespace isogrow
