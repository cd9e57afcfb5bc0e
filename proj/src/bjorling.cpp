#include "isogrow/bjorling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

Point3 series_eval(const std::array<Series, 3>& s, double t, int order) {
    Point3 p;
    for (int i = 0; i < 3; ++i) p[i] = order == 0 ? s[i].value(t) : order == 1 ? s[i].d1(t) : s[i].d2(t);
    return p;
}

void require_star(double z, double eps, const char* what, double xi) {
    if (!(std::abs(eps * z) < 1.0))
        throw Error(ErrorCode::StarOverflow,
                    std::string("|eps*") + what + "| >= 1 at xi = " + std::to_string(xi));
}

}  // namespace

double Series::value(double t) const {
    double s = 0.0;
    for (std::size_t k = poly.size(); k-- > 0;) s = s * t + poly[k];
    for (auto& c : trig) s += c[1] * std::cos(c[0] * t) + c[2] * std::sin(c[0] * t);
    return s;
}

double Series::d1(double t) const {
    double s = 0.0;
    for (std::size_t k = poly.size(); k-- > 1;) s = s * t + static_cast<double>(k) * poly[k];
    for (auto& c : trig) s += c[0] * (-c[1] * std::sin(c[0] * t) + c[2] * std::cos(c[0] * t));
    return s;
}

double Series::d2(double t) const {
    double s = 0.0;
    for (std::size_t k = poly.size(); k-- > 2;) s = s * t + static_cast<double>(k * (k - 1)) * poly[k];
    for (auto& c : trig) s -= c[0] * c[0] * (c[1] * std::cos(c[0] * t) + c[2] * std::sin(c[0] * t));
    return s;
}

CauchyData::CauchyData(BjorlingData data, double fd_step) : data_(std::move(data)), fd_step_(fd_step) {}

Point3 CauchyData::second_derivative(double xi) const {
    if (data_.d2f) return data_.d2f(xi);
    const double h = fd_step_;
    return (-data_.df(xi + 2 * h) + 8.0 * data_.df(xi + h) - 8.0 * data_.df(xi - h) + data_.df(xi - 2 * h)) /
           (12.0 * h);
}

CauchySample CauchyData::at(double xi) const {
    const Point3 fp = data_.df(xi);
    const Point3 nn = data_.n(xi);
    const Point3 dn = data_.dn(xi);
    const Point3 fpp = second_derivative(xi);
    const double len = fp.norm();
    if (!(len > 0.0)) throw Error(ErrorCode::DegenerateCurve, "f' vanishes at xi = " + std::to_string(xi));

    const Point3 t = fp / len;
    const Point3 s = nn.cross(t);
    const Point3 dt = (fpp - t * t.dot(fpp)) / len;
    const Point3 ds = dn.cross(t) + nn.cross(dt);

    CauchySample out;
    out.u = std::log(len) - 0.5 * std::log(2.0);
    out.v = 0.5 * fp.dot(fpp) / (len * len);
    const Point3 psi1 = (t + s) / kSqrt2, psi2 = (s - t) / kSqrt2;
    const Point3 dpsi2 = (ds - dt) / kSqrt2;
    out.Psi.col(0) = psi1;
    out.Psi.col(1) = psi2;
    out.Psi.col(2) = nn;
    out.w = 0.5 * psi1.dot(dpsi2);
    out.k = -psi1.dot(dn);
    out.l = psi2.dot(dn);
    return out;
}

CauchyData derive_cauchy_data(const BjorlingData& data, double fd_step) {
    if (!data.f || !data.n || !data.df || !data.dn)
        throw Error(ErrorCode::DegenerateCurve, "Bjorling data lacks an evaluator");
    constexpr int samples = 101;
    for (int i = 0; i < samples; ++i) {
        double xi = -data.r + 2.0 * data.r * i / (samples - 1);
        Point3 fp = data.df(xi), nn = data.n(xi);
        double len = fp.norm();
        if (!(len > 0.0)) throw Error(ErrorCode::DegenerateCurve, "f' vanishes at xi = " + std::to_string(xi));
        if (std::abs(nn.norm() - 1.0) > 1e-12)
            throw Error(ErrorCode::NonOrthogonal, "normal field is not unit at xi = " + std::to_string(xi));
        if (std::abs(fp.dot(nn)) > 1e-10 * len)
            throw Error(ErrorCode::NonOrthogonal, "<f', n> != 0 at xi = " + std::to_string(xi));
    }
    return CauchyData(data, fd_step);
}

namespace {

// Offset from the apex (slot p1 or p3) to the missing neighbour of a quad, given the offset to the
// known neighbour and the quad normal. Enforces |p2 - apex| / |p4 - apex| = exp(eps v) and
// cos(angle at apex) = cos_apex.
Point3 apex_offset(const Point3& dk, bool apex_is_p1, bool unknown_is_p2, const Point3& normal, double eps_v,
                   double cos_apex) {
    const double sigma = apex_is_p1 ? 1.0 : -1.0;
    const double len = dk.norm();
    const Point3 kh = dk / len;
    const double sn = std::sqrt(std::max(0.0, 1.0 - cos_apex * cos_apex));
    const double side = unknown_is_p2 ? -sigma : sigma;
    const double ratio = unknown_is_p2 ? std::exp(eps_v) : std::exp(-eps_v);
    return len * ratio * (cos_apex * kh + side * sn * normal.cross(kh));
}

struct StripBuilder {
    const CauchyData& cd;
    double eps;
    InitialStrip strip;
    std::map<std::pair<int, int>, Point3> normals;

    StripBuilder(const CauchyData& c, double e, const DomainSpec& s) : cd(c), eps(e), strip(s) {}

    Point3 normal(LatticeIndex c) const { return normals.at({c.m, c.n}); }

    // Adds quad `center`, whose vertices except one of p2/p4 exist, sharing `edge` with `old_center`.
    // Returns false when the new vertex leaves the domain.
    bool add_quad(LatticeIndex center, LatticeIndex old_center, LatticeIndex edge) {
        const auto& pos = strip.positions;
        const DomainSpec& spec = strip.spec;
        auto sq = elementary_square(center);
        const int unknown = pos.has(sq[1]) ? 3 : 1;
        if (!spec.contains(sq[unknown])) return false;
        const bool unknown_is_p2 = unknown == 1;
        const bool apex_is_p1 = pos.has(sq[0]);
        const LatticeIndex apex = apex_is_p1 ? sq[0] : sq[2];
        const LatticeIndex known = unknown_is_p2 ? sq[3] : sq[1];

        const double xe = spec.xi(edge);
        const bool x_edge = slot_of(edge) == Slot::XEdge;
        const CauchySample ce = cd.at(xe);
        const double z = x_edge ? ce.l : ce.k;
        require_star(z, eps, x_edge ? "l0" : "k0", xe);
        const bool new_is_a = x_edge ? center == shift(edge, Dir::Y, -1) : center == shift(edge, Dir::X, +1);
        const Dir along = x_edge ? Dir::X : Dir::Y;
        const Point3 t = strip.edge(shift(edge, along, +1), shift(edge, along, -1)).normalized();
        const double sphi = new_is_a ? -eps * z : eps * z;
        const double cphi = std::sqrt(1.0 - sphi * sphi);
        const Point3 n_old = normal(old_center);
        const Point3 n_new = (cphi * n_old + sphi * t.cross(n_old)).normalized();

        const double xc = spec.xi(center);
        const CauchySample cc = cd.at(xc);
        require_star(cc.v, eps, "v0", xc);
        require_star(cc.w, eps, "w0", xc);
        const double cos_apex = apex_is_p1 ? -eps * cc.w : eps * cc.w;
        const Point3 dk = strip.edge(known, apex);
        const Point3 d = apex_offset(dk, apex_is_p1, unknown_is_p2, n_new, eps * cc.v, cos_apex);
        if (is_collinear(Point3::Zero(), dk, d))
            throw Error(ErrorCode::DegenerateTriple, "strip triple at " + to_string(center) + " is collinear");
        strip.place(sq[unknown], apex, d);
        normals[{center.m, center.n}] = n_new;
        return true;
    }
};

}  // namespace

InitialStrip sample_initial_strip(const CauchyData& cd, const BjorlingData& data, double eps) {
    if (!(eps > 0.0) || !(eps < data.r)) throw Error(ErrorCode::InvalidDomain, "need 0 < eps < r");
    const DomainSpec spec = DomainSpec::make(data.r, 0.5 * eps, eps);
    StripBuilder b(cd, eps, spec);

    // Central quad (1,1): apex (0,0) = f(0), x-neighbour along Psi1, y-neighbour by the apex rule.
    const CauchySample c0 = cd.at(0.0);
    require_star(c0.v, eps, "v0", 0.0);
    require_star(c0.w, eps, "w0", 0.0);
    const Point3 dx = eps * std::exp(c0.u + 0.5 * eps * c0.v) * c0.Psi.col(0);
    const Point3 n0 = c0.Psi.col(2);
    b.strip.set({0, 0}, data.f(0.0));
    b.strip.place({2, 0}, {0, 0}, dx);
    b.strip.place({0, 2}, {0, 0}, apex_offset(dx, true, false, n0, eps * c0.v, -eps * c0.w));
    b.normals[{1, 1}] = n0;

    // East: lower quad (2k+1,-2k-1) across x-edge (2k+1,-2k), then upper quad (2k+3,-2k-1) across y-edge.
    for (int k = 0;; ++k) {
        if (!b.add_quad({2 * k + 1, -2 * k - 1}, {2 * k + 1, 1 - 2 * k}, {2 * k + 1, -2 * k})) break;
        if (!b.add_quad({2 * k + 3, -2 * k - 1}, {2 * k + 1, -2 * k - 1}, {2 * k + 2, -2 * k - 1})) break;
    }
    // West: lower quad (2k-1,1-2k) across y-edge (2k,1-2k), then upper quad (2k-1,3-2k) across x-edge.
    for (int k = 0;; --k) {
        if (!b.add_quad({2 * k - 1, 1 - 2 * k}, {2 * k + 1, 1 - 2 * k}, {2 * k, 1 - 2 * k})) break;
        if (!b.add_quad({2 * k - 1, 3 - 2 * k}, {2 * k - 1, 1 - 2 * k}, {2 * k - 1, 2 - 2 * k})) break;
    }
    return std::move(b.strip);
}

BjorlingData user_bjorling(const UserCurve& spec) {
    BjorlingData d;
    d.name = "user";
    d.r = spec.r;
    auto f = spec.f;
    auto g = spec.g;
    d.f = [f](double t) { return series_eval(f, t, 0); };
    d.df = [f](double t) { return series_eval(f, t, 1); };
    d.d2f = [f](double t) { return series_eval(f, t, 2); };
    d.n = [f, g](double t) {
        Point3 tan = series_eval(f, t, 1).normalized();
        Point3 gv = series_eval(g, t, 0);
        return Point3((gv - gv.dot(tan) * tan).normalized());
    };
    d.dn = [f, g](double t) {
        Point3 fp = series_eval(f, t, 1), fpp = series_eval(f, t, 2);
        double len = fp.norm();
        Point3 tan = fp / len;
        Point3 dtan = (fpp - tan * tan.dot(fpp)) / len;
        Point3 gv = series_eval(g, t, 0), dg = series_eval(g, t, 1);
        Point3 p = gv - gv.dot(tan) * tan;
        Point3 dp = dg - (dg.dot(tan) + gv.dot(dtan)) * tan - gv.dot(tan) * dtan;
        double pn = p.norm();
        Point3 nn = p / pn;
        return Point3((dp - nn * nn.dot(dp)) / pn);
    };
    return d;
}

std::string canonical_surface_name(const std::string& name) {
    std::string s = name;
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "sphere") s = "sphere_mercator";
    if (s == "user_polynomial") s = "user";
    return s;
}

BjorlingData bjorling_catalog(const std::string& name, double r) {
    const std::string key = canonical_surface_name(name);
    BjorlingData d;
    d.name = key;
    d.r = r;
    if (key == "cylinder") {
        d.f = [](double t) { return Point3(std::cos(t), std::sin(t), -t); };
        d.df = [](double t) { return Point3(-std::sin(t), std::cos(t), -1.0); };
        d.d2f = [](double t) { return Point3(-std::cos(t), -std::sin(t), 0.0); };
        d.n = [](double t) { return Point3(std::cos(t), std::sin(t), 0.0); };
        d.dn = [](double t) { return Point3(-std::sin(t), std::cos(t), 0.0); };
        return d;
    }
    if (key == "sphere_mercator") {
        // f(t) = (sech t cos t, sech t sin t, -tanh t), n = f.
        auto f = [](double t) {
            double s = 1.0 / std::cosh(t);
            return Point3(s * std::cos(t), s * std::sin(t), -std::tanh(t));
        };
        auto df = [](double t) {
            double s = 1.0 / std::cosh(t), th = std::tanh(t), c = std::cos(t), sn = std::sin(t);
            return Point3(-s * th * c - s * sn, -s * th * sn + s * c, -s * s);
        };
        d.f = f;
        d.n = f;
        d.df = df;
        d.dn = df;
        d.d2f = [](double t) {
            double s = 1.0 / std::cosh(t), th = std::tanh(t), c = std::cos(t), sn = std::sin(t);
            return Point3(-2 * s * s * s * c + 2 * s * th * sn, -2 * s * s * s * sn - 2 * s * th * c, 2 * s * s * th);
        };
        return d;
    }
    throw Error(ErrorCode::UnknownName, "unknown surface '" + name + "'");
}

}  // namespace isogrow
