#include "isogrow/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

template <class Field, class Fn>
void for_each_slot(const DomainSpec& spec, Fn&& fn) {
    const int k = spec.k_r;
    for (int n = -k; n <= k; ++n)
        for (int m = -k; m <= k; ++m) {
            LatticeIndex i{m, n};
            if (slot_of(i) == Field::kind && spec.contains(i)) fn(i);
        }
}

// Log-lengths are kept in extended precision so that v, w inherit the exactness of the mixed identity.
template <Slot K>
void edge_quantities(const DiscreteSurface& s, Dir along, StaggeredField<double, K>& logs,
                     StaggeredField<long double, K>& logs_ext, StaggeredField<Point3, K>& units) {
    const auto& pos = s.positions;
    const long double log_eps = std::log(static_cast<long double>(s.eps));
    for_each_slot<StaggeredField<double, K>>(s.spec, [&](LatticeIndex e) {
        if (!diff_defined(pos, along, e)) return;
        const Point3L d = s.edge_ext(shift(e, along, 1), shift(e, along, -1));
        const long double len = d.norm();
        if (!(len > 0.0L)) throw Error(ErrorCode::DegenerateEdge, "zero-length edge at " + to_string(e));
        const long double lg = std::log(len) - log_eps;
        logs_ext.set(e, lg);
        logs.set(e, static_cast<double>(lg));
        units.set(e, (d / len).cast<double>());
    });
}

bool all_present(const CenterField<double>& f, std::initializer_list<LatticeIndex> idx) {
    for (auto& i : idx)
        if (!f.has(i)) return false;
    return true;
}

}  // namespace

DiscreteQuantities extract(const DiscreteSurface& s) {
    const DomainSpec& spec = s.spec;
    const double eps = s.eps;
    DiscreteQuantities q;
    q.eps = eps;
    q.u_hat = XEdgeField<double>(spec);
    q.u_check = YEdgeField<double>(spec);
    q.a = XEdgeField<Point3>(spec);
    q.b = YEdgeField<Point3>(spec);
    q.N = CenterField<Point3>(spec);
    q.v = q.w = q.v_tilde = q.w_tilde = CenterField<double>(spec);
    q.k = YEdgeField<double>(spec);
    q.l = XEdgeField<double>(spec);

    XEdgeField<long double> uh(spec);
    YEdgeField<long double> uc(spec);
    edge_quantities(s, Dir::X, q.u_hat, uh, q.a);
    edge_quantities(s, Dir::Y, q.u_check, uc, q.b);

    for_each_slot<CenterField<double>>(spec, [&](LatticeIndex c) {
        const LatticeIndex xp = shift(c, Dir::X, 1), xm = shift(c, Dir::X, -1);
        const LatticeIndex yp = shift(c, Dir::Y, 1), ym = shift(c, Dir::Y, -1);
        if (!uc.has(xp) || !uc.has(xm) || !uh.has(yp) || !uh.has(ym)) return;
        const long double A = uc.at(xp), B = uc.at(xm), C = uh.at(yp), D = uh.at(ym);
        const double v1 = static_cast<double>((A - C) / eps), v2 = static_cast<double>((D - B) / eps);
        const double w1 = static_cast<double>((A - D) / eps), w2 = static_cast<double>((C - B) / eps);
        q.vw_disagreement = std::max({q.vw_disagreement, std::abs(v1 - v2), std::abs(w1 - w2)});
        q.v.set(c, v1);
        q.w.set(c, w1);

        const Point3 &ap = q.a.at(yp), &am = q.a.at(ym), &bp = q.b.at(xp), &bm = q.b.at(xm);
        const double vt1 = ap.dot(bm) / eps, vt2 = -am.dot(bp) / eps;
        const double wt1 = ap.dot(bp) / eps, wt2 = -am.dot(bm) / eps;
        q.tilde_disagreement = std::max({q.tilde_disagreement, std::abs(vt1 - vt2), std::abs(wt1 - wt2)});
        q.v_tilde.set(c, vt1);
        q.w_tilde.set(c, wt1);
        q.N.set(c, ap.cross(bp).normalized());
    });

    for_each_slot<YEdgeField<double>>(spec, [&](LatticeIndex e) {
        const LatticeIndex cp = shift(e, Dir::X, 1), cm = shift(e, Dir::X, -1);
        if (!q.N.has(cp) || !q.N.has(cm) || !q.b.has(e)) return;
        q.k.set(e, -q.N.at(cm).cross(q.N.at(cp)).dot(q.b.at(e)) / eps);
    });
    for_each_slot<XEdgeField<double>>(spec, [&](LatticeIndex e) {
        const LatticeIndex cp = shift(e, Dir::Y, 1), cm = shift(e, Dir::Y, -1);
        if (!q.N.has(cp) || !q.N.has(cm) || !q.a.has(e)) return;
        q.l.set(e, q.N.at(cm).cross(q.N.at(cp)).dot(q.a.at(e)) / eps);
    });
    return q;
}

double star(double z, double eps) {
    double ez = eps * z;
    if (!(std::abs(ez) < 1.0)) throw Error(ErrorCode::StarOverflow, "|eps*z| >= 1");
    return std::sqrt((1.0 - ez) * (1.0 + ez));
}

VW vw_from_tilde(double vt, double wt, double eps) {
    const double vs = star(vt, eps), ws = star(wt, eps);
    return {std::asinh(eps * vt * ws / vs) / eps, std::asinh(eps * wt * vs / ws) / eps};
}

Tilde tilde_from_vw(double v, double w, double eps) {
    return {std::tanh(eps * v) * std::cosh(eps * w) / eps, std::tanh(eps * w) * std::cosh(eps * v) / eps};
}

Mixed mixed_pair_solve(double v, double wt, double eps) {
    // x / sqrt(1 - x^2) = g is inverted in closed form, x = eps v~.
    const double ws = star(wt, eps);
    const double g = std::sinh(eps * v) / ws;
    const double x = g / std::sqrt(1.0 + g * g);
    const double vt = x / eps;
    const double vs = std::sqrt(1.0 / (1.0 + g * g));
    return {vt, std::asinh(eps * wt * vs / ws) / eps};
}

double FrameResiduals::max() const { return std::max({reconf_x, reconf_y, recona, reconb, reconu}); }

FrameResiduals frame_relation_residuals(const DiscreteSurface& s, const DiscreteQuantities& q) {
    FrameResiduals r;
    const double eps = q.eps;
    auto delta = [&](LatticeIndex e, Dir d) { return Point3(s.edge(shift(e, d, 1), shift(e, d, -1)) / eps); };
    q.a.for_each([&](LatticeIndex e, const Point3& a) {
        r.reconf_x = std::max(r.reconf_x, (delta(e, Dir::X) - std::exp(q.u_hat.at(e)) * a).norm());
    });
    q.b.for_each([&](LatticeIndex e, const Point3& b) {
        r.reconf_y = std::max(r.reconf_y, (delta(e, Dir::Y) - std::exp(q.u_check.at(e)) * b).norm());
    });
    q.v_tilde.for_each([&](LatticeIndex c, const double& vt) {
        const double wt = q.w_tilde.at(c);
        const double ratio = star(vt, eps) / star(wt, eps);
        const LatticeIndex xp = shift(c, Dir::X, 1), xm = shift(c, Dir::X, -1);
        const LatticeIndex yp = shift(c, Dir::Y, 1), ym = shift(c, Dir::Y, -1);
        const Point3 day = diff(q.a, Dir::Y, c);
        const Point3 pa = (vt + wt * ratio) * q.b.at(xm) + (ratio - 1.0) / eps * q.a.at(ym);
        const Point3 dbx = diff(q.b, Dir::X, c);
        const Point3 pb = (ratio - 1.0) / eps * q.b.at(xm) + (wt * ratio - vt) * q.a.at(ym);
        r.recona = std::max(r.recona, (day - pa).norm());
        r.reconb = std::max(r.reconb, (dbx - pb).norm());
        const double v = q.v.at(c), w = q.w.at(c);
        r.reconu = std::max({r.reconu, std::abs((q.u_hat.at(yp) - q.u_hat.at(ym)) / eps - (w - v)),
                             std::abs((q.u_check.at(xp) - q.u_check.at(xm)) / eps - (w + v))});
    });
    return r;
}

GCResiduals gc_residuals(const DiscreteQuantities& q) {
    GCResiduals r;
    const double eps = q.eps;
    const DomainSpec& spec = q.v.spec();
    for_each_slot<VertexField<double>>(spec, [&](LatticeIndex p) {
        const LatticeIndex cn = shift(p, Dir::Eta, 1), cs = shift(p, Dir::Eta, -1);
        const LatticeIndex ce = shift(p, Dir::Xi, 1), cw = shift(p, Dir::Xi, -1);
        if (!all_present(q.v, {cn, cs, ce, cw})) return;
        const double dv_eta = (q.v.at(cn) - q.v.at(cs)) / eps, dw_xi = (q.w.at(ce) - q.w.at(cw)) / eps;
        const double dw_eta = (q.w.at(cn) - q.w.at(cs)) / eps, dv_xi = (q.v.at(ce) - q.v.at(cw)) / eps;
        r.r_gd1 = std::max(r.r_gd1, std::abs(dv_eta - dw_xi));

        const LatticeIndex ky = shift(p, Dir::Y, -1), lx = shift(p, Dir::X, -1);
        if (!q.k.has(ky) || !q.l.has(lx)) return;
        const double k_s = q.k.at(ky), l_w = q.l.at(lx);
        r.r_gd1a = std::max(r.r_gd1a, std::abs(dw_eta + dv_xi + k_s * l_w));

        const LatticeIndex kn = shift(p, Dir::Y, 1), le = shift(p, Dir::X, 1);
        if (q.k.has(kn)) {
            const double dk_y = (q.k.at(kn) - k_s) / eps;
            r.r_gd2 = std::max(r.r_gd2, std::abs(dk_y - l_w * (q.w.at(cs) - q.v.at(ce))));
        }
        if (q.l.has(le)) {
            const double dl_x = (q.l.at(le) - l_w) / eps;
            r.r_gd3 = std::max(r.r_gd3, std::abs(dl_x - k_s * (q.w.at(cs) + q.v.at(cw))));
        }
    });
    q.v.for_each([&](LatticeIndex c, const double&) {
        const double A = q.u_check.at(shift(c, Dir::X, 1)), B = q.u_check.at(shift(c, Dir::X, -1));
        const double C = q.u_hat.at(shift(c, Dir::Y, 1)), D = q.u_hat.at(shift(c, Dir::Y, -1));
        r.r_defiso = std::max(r.r_defiso, std::abs(std::expm1((A + B) - (C + D))));
    });
    return r;
}

void write_quantities_csv(const DiscreteQuantities& q, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << "m,n,slot,quantity,c0,c1,c2\n";
    char buf[160];
    auto scalar = [&](const char* name, auto& field) {
        field.for_each([&](LatticeIndex i, const double& x) {
            std::snprintf(buf, sizeof buf, "%d,%d,%s,%s,%.17g,,\n", i.m, i.n, slot_name(slot_of(i)), name, x);
            out << buf;
        });
    };
    auto vector = [&](const char* name, auto& field) {
        field.for_each([&](LatticeIndex i, const Point3& x) {
            std::snprintf(buf, sizeof buf, "%d,%d,%s,%s,%.17g,%.17g,%.17g\n", i.m, i.n, slot_name(slot_of(i)), name,
                          x[0], x[1], x[2]);
            out << buf;
        });
    };
    scalar("u_hat", q.u_hat);
    vector("a", q.a);
    scalar("l", q.l);
    scalar("u_check", q.u_check);
    vector("b", q.b);
    scalar("k", q.k);
    vector("N", q.N);
    scalar("v", q.v);
    scalar("w", q.w);
    scalar("v_tilde", q.v_tilde);
    scalar("w_tilde", q.w_tilde);
}

}  // namespace isogrow
