#include "isogrow/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>

#include "isogrow/error.hpp"

namespace isogrow {

namespace {

struct Neighbor {
    LatticeIndex to;
    bool x_edge;
    bool forward;  // `to` lies in the positive direction
};

std::array<Neighbor, 4> neighbors(LatticeIndex p) {
    return {Neighbor{{p.m + 2, p.n}, true, true}, Neighbor{{p.m - 2, p.n}, true, false},
            Neighbor{{p.m, p.n + 2}, false, true}, Neighbor{{p.m, p.n - 2}, false, false}};
}

Point3L dual_edge(const DiscreteSurface& s, LatticeIndex from, LatticeIndex to, bool x_edge) {
    Point3L e = s.edge_ext(to, from);
    long double n2 = e.squaredNorm();
    if (!(n2 > 0))
        throw Error(ErrorCode::DegenerateEdge, "zero-length edge " + to_string(from) + " -> " + to_string(to));
    long double eps2 = (long double)s.eps * s.eps;
    return (x_edge ? eps2 : -eps2) * e / n2;
}

}  // namespace

DiscreteSurface christoffel_discrete(const DiscreteSurface& surface, LatticeIndex base) {
    if (slot_of(base) != Slot::Vertex)
        throw Error(ErrorCode::WrongParity, "christoffel base " + to_string(base) + " is not a vertex");
    if (!surface.positions.has(base))
        throw Error(ErrorCode::OutOfDomain, "christoffel base " + to_string(base) + " is not on the surface");
    DiscreteSurface dual(surface.spec);
    dual.set(base, Point3::Zero());
    std::deque<LatticeIndex> queue{base};
    while (!queue.empty()) {
        LatticeIndex p = queue.front();
        queue.pop_front();
        for (const Neighbor& nb : neighbors(p)) {
            if (!surface.positions.has(nb.to) || dual.positions.has(nb.to)) continue;
            dual.place(nb.to, p, dual_edge(surface, p, nb.to, nb.x_edge));
            queue.push_back(nb.to);
        }
    }
    return dual;
}

double christoffel_closedness(const DiscreteSurface& s) {
    double worst = 0.0;
    for (LatticeIndex c : s.complete_quads()) {
        LatticeIndex p00{c.m - 1, c.n - 1}, p10{c.m + 1, c.n - 1}, p11{c.m + 1, c.n + 1}, p01{c.m - 1, c.n + 1};
        Point3L w1 = dual_edge(s, p00, p10, true), w2 = dual_edge(s, p10, p11, false);
        Point3L w3 = dual_edge(s, p01, p11, true), w4 = dual_edge(s, p00, p01, false);
        long double scale = std::max({w1.norm(), w2.norm(), w3.norm(), w4.norm()});
        worst = std::max(worst, double((w1 + w2 - w3 - w4).norm() / scale));
    }
    return worst;
}

namespace {

Point3 position(const DiscreteSurface& s, LatticeIndex i) {
    Point3L p = s.positions.at(i).cast<long double>();
    if (s.residual.has(i)) p += s.residual.at(i).cast<long double>();
    return p.cast<double>();
}

// Edge quadruple (F(P), F(P'), F+(P'), F+(P)) with P' = P + 2 in the edge direction.
Point3 darboux_solve(const std::array<Point3, 3>& known, int missing, cplx q, LatticeIndex at) {
    Completion c;
    try {
        c = complete_with_cross_ratio(known, missing, q);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CollinearInput)
            throw Error(ErrorCode::DegeneratePlane, "collinear Darboux triple at " + to_string(at));
        throw;
    }
    if (!(c.condition < 1e8) || !c.point.allFinite())
        throw Error(ErrorCode::StarOverflow, "vanishing Moebius denominator at " + to_string(at));
    return c.point;
}

}  // namespace

DarbouxResult darboux_discrete(const DiscreteSurface& surface, const Point3& seed, double C, LatticeIndex start) {
    if (C == 0.0 || !std::isfinite(C)) throw Error(ErrorCode::InvalidDomain, "Darboux parameter C must be nonzero");
    if (slot_of(start) != Slot::Vertex || !surface.positions.has(start))
        throw Error(ErrorCode::OutOfDomain, "Darboux start " + to_string(start) + " is not a surface vertex");
    const Point3 f0 = position(surface, start);
    if ((seed - f0).norm() <= 1e-12 * std::max(1.0, f0.norm()))
        throw Error(ErrorCode::CoincidentPoints, "Darboux seed coincides with the surface");

    const double qx = surface.eps * surface.eps / C;
    DarbouxResult res{DiscreteSurface(surface.spec), {}};
    DiscreteSurface& plus = res.surface;
    plus.set(start, seed);
    std::deque<LatticeIndex> queue{start};
    while (!queue.empty()) {
        LatticeIndex p = queue.front();
        queue.pop_front();
        for (const Neighbor& nb : neighbors(p)) {
            if (!surface.positions.has(nb.to)) continue;
            cplx q = nb.x_edge ? qx : -qx;
            Point3 predicted;
            if (nb.forward)
                predicted = darboux_solve({position(surface, p), position(surface, nb.to), plus.positions.at(p)}, 3, q,
                                          nb.to);
            else
                predicted = darboux_solve({position(surface, nb.to), position(surface, p), plus.positions.at(p)}, 4, q,
                                          nb.to);
            if (plus.positions.has(nb.to)) {
                double scale = std::max((position(surface, nb.to) - position(surface, p)).norm(),
                                        (plus.positions.at(p) - position(surface, p)).norm());
                res.audit.loop_defect =
                    std::max(res.audit.loop_defect, (predicted - plus.positions.at(nb.to)).norm() / scale);
                continue;
            }
            plus.set(nb.to, predicted);
            queue.push_back(nb.to);
        }
    }
    DarbouxAudit check = darboux_audit(surface, plus, C);
    res.audit.cr_defect = check.cr_defect;
    res.audit.edges = check.edges;
    return res;
}

DarbouxAudit darboux_audit(const DiscreteSurface& surface, const DiscreteSurface& plus, double C) {
    DarbouxAudit a;
    const double target = surface.eps * surface.eps / C;
    plus.positions.for_each([&](LatticeIndex p, const Point3&) {
        for (int dir = 0; dir < 2; ++dir) {
            LatticeIndex p2 = dir == 0 ? LatticeIndex{p.m + 2, p.n} : LatticeIndex{p.m, p.n + 2};
            if (!plus.positions.has(p2) || !surface.positions.has(p2) || !surface.positions.has(p)) continue;
            cplx q = cross_ratio(position(surface, p), position(surface, p2), plus.positions.at(p2), plus.positions.at(p));
            double t = dir == 0 ? target : -target;
            a.cr_defect = std::max(a.cr_defect, std::abs(q - t) / std::abs(t));
            ++a.edges;
        }
    });
    return a;
}

// ---- smooth transforms ----

namespace {

// dP/dx and dP/dy of the transformed surface given its current value.
struct Flow {
    std::function<Point3(double x, double y, const Point3& P)> dx, dy;
};

Point3 rk4_line(const Flow& fl, Point3 P, double x, double y, double target, bool along_x, double substep) {
    double from = along_x ? x : y;
    int n = std::max(1, int(std::ceil(std::abs(target - from) / substep)));
    double hs = (target - from) / n;
    auto f = [&](double t, const Point3& Q) { return along_x ? fl.dx(t, y, Q) : fl.dy(x, t, Q); };
    double t = from;
    for (int i = 0; i < n; ++i) {
        Point3 k1 = f(t, P);
        Point3 k2 = f(t + 0.5 * hs, P + 0.5 * hs * k1);
        Point3 k3 = f(t + 0.5 * hs, P + 0.5 * hs * k2);
        Point3 k4 = f(t + hs, P + hs * k3);
        P += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += hs;
    }
    return P;
}

// F, F_alt by path integration from (0,0); F_x, F_y from the flow; u, N, v, w, k, l derived.
SmoothSurface integrate_transform(const std::string& name, const SmoothSurface& base, std::shared_ptr<Flow> fl,
                                  Point3 start, const SmoothTransformOptions& opt) {
    SmoothSurface s;
    s.name = name;
    s.r = base.r;
    s.h = base.h;
    double sub = opt.substep;
    s.F = [fl, start, sub](double x, double y) {
        Point3 P = rk4_line(*fl, start, 0.0, 0.0, x, true, sub);
        return rk4_line(*fl, P, x, 0.0, y, false, sub);
    };
    s.F_alt = [fl, start, sub](double x, double y) {
        Point3 P = rk4_line(*fl, start, 0.0, 0.0, y, false, sub);
        return rk4_line(*fl, P, 0.0, y, x, true, sub);
    };
    auto F = s.F;
    s.F_x = [fl, F](double x, double y) { return fl->dx(x, y, F(x, y)); };
    s.F_y = [fl, F](double x, double y) { return fl->dy(x, y, F(x, y)); };
    auto Fx = s.F_x, Fy = s.F_y;
    s.N = [Fx, Fy](double x, double y) { return Point3(Fx(x, y).cross(Fy(x, y)).normalized()); };
    s.u = [Fx](double x, double y) { return std::log(Fx(x, y).norm()); };
    double d = opt.fd_step;
    auto u = s.u;
    auto ux = [u, d](double x, double y) {
        return (u(x - 2 * d, y) - 8 * u(x - d, y) + 8 * u(x + d, y) - u(x + 2 * d, y)) / (12 * d);
    };
    auto uy = [u, d](double x, double y) {
        return (u(x, y - 2 * d) - 8 * u(x, y - d) + 8 * u(x, y + d) - u(x, y + 2 * d)) / (12 * d);
    };
    s.v = [ux, uy](double x, double y) { return 0.5 * (ux(x, y) - uy(x, y)); };
    s.w = [ux, uy](double x, double y) { return 0.5 * (ux(x, y) + uy(x, y)); };
    auto N = s.N;
    s.k = [N, Fx, d](double x, double y) {
        Point3 Nx = (N(x - 2 * d, y) - 8 * N(x - d, y) + 8 * N(x + d, y) - N(x + 2 * d, y)) / (12 * d);
        Point3 fx = Fx(x, y);
        return -Nx.dot(fx) / fx.norm();
    };
    s.l = [N, Fy, d](double x, double y) {
        Point3 Ny = (N(x, y - 2 * d) - 8 * N(x, y - d) + 8 * N(x, y + d) - N(x, y + 2 * d)) / (12 * d);
        Point3 fy = Fy(x, y);
        return -Ny.dot(fy) / fy.norm();
    };
    return s;
}

}  // namespace

SmoothSurface christoffel_smooth(const SmoothSurface& surface, const SmoothTransformOptions& opt) {
    auto fl = std::make_shared<Flow>();
    auto Fx = surface.F_x, Fy = surface.F_y;
    auto checked = [](const Point3& e, double x, double y) {
        double n2 = e.squaredNorm();
        if (!(n2 > 1e-300))
            throw Error(ErrorCode::DegenerateMetric,
                        "vanishing metric at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        return n2;
    };
    fl->dx = [Fx, checked](double x, double y, const Point3&) {
        Point3 e = Fx(x, y);
        return Point3(e / checked(e, x, y));
    };
    fl->dy = [Fy, checked](double x, double y, const Point3&) {
        Point3 e = Fy(x, y);
        return Point3(-e / checked(e, x, y));
    };
    return integrate_transform(surface.name + "_dual", surface, fl, Point3::Zero(), opt);
}

SmoothSurface darboux_smooth(const SmoothSurface& surface, const Point3& seed, double C,
                             const SmoothTransformOptions& opt) {
    if (C == 0.0 || !std::isfinite(C)) throw Error(ErrorCode::InvalidDomain, "Darboux parameter C must be nonzero");
    auto fl = std::make_shared<Flow>();
    auto F = surface.F, Fx = surface.F_x, Fy = surface.F_y;
    double tol = opt.collapse_tol;
    // sign * |d|^2/(C|e|^2) (e - 2<e,dhat> dhat), sign = -1 for x, +1 for y
    auto rhs = [F, C, tol](const Point3& e, double x, double y, const Point3& P, double sign) {
        Point3 d = P - F(x, y);
        double dn = d.norm();
        if (!(dn > tol))
            throw Error(ErrorCode::CollapsedPair,
                        "Darboux pair collapsed at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        Point3 dh = d / dn;
        return Point3(sign * dn * dn / (C * e.squaredNorm()) * (e - 2.0 * e.dot(dh) * dh));
    };
    fl->dx = [Fx, rhs](double x, double y, const Point3& P) { return rhs(Fx(x, y), x, y, P, -1.0); };
    fl->dy = [Fy, rhs](double x, double y, const Point3& P) { return rhs(Fy(x, y), x, y, P, +1.0); };
    Point3 d0 = seed - surface.F(0.0, 0.0);
    if (!(d0.norm() > tol)) throw Error(ErrorCode::CollapsedPair, "Darboux seed coincides with F(0,0)");
    return integrate_transform(surface.name + "_darboux", surface, fl, seed, opt);
}

double path_defect(const SmoothSurface& t, const std::vector<std::array<double, 2>>& xy) {
    if (!t.F_alt) return 0.0;
    double worst = 0.0;
    for (const auto& p : xy) worst = std::max(worst, (t.F(p[0], p[1]) - t.F_alt(p[0], p[1])).norm());
    return worst;
}

}  // namespace isogrow
