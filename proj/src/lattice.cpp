#include "isogrow/lattice.hpp"

#include <cmath>

namespace isogrow {

std::string to_string(const LatticeIndex& i) {
    return "(" + std::to_string(i.m) + "," + std::to_string(i.n) + ")";
}

const char* slot_name(Slot s) {
    switch (s) {
        case Slot::Vertex: return "vertex";
        case Slot::QuadCenter: return "quad_center";
        case Slot::XEdge: return "x_edge";
        case Slot::YEdge: return "y_edge";
    }
    return "?";
}

DomainSpec DomainSpec::make(double r, double h, double eps) {
    if (!(r > 0.0) || !(h > 0.0) || !(h <= r) || !(eps > 0.0) || !(eps <= 2.0 * h * (1.0 + 1e-12)))
        throw Error(ErrorCode::InvalidDomain, "need r > 0, 0 < h <= r, 0 < eps <= 2h");
    constexpr double slack = 1e-9;
    DomainSpec d;
    d.r = r;
    d.h = h;
    d.eps = eps;
    d.k_r = static_cast<int>(std::floor(2.0 * r / eps + slack));
    double s_bound = 4.0 * h / eps;
    d.s_hi = static_cast<int>(std::floor(s_bound + slack));
    d.s_lo = static_cast<int>(std::floor(-s_bound + slack)) + 1;
    return d;
}

std::array<LatticeIndex, 4> elementary_square(LatticeIndex c) {
    if (slot_of(c) != Slot::QuadCenter)
        throw Error(ErrorCode::WrongParity, to_string(c) + " is not a quad center");
    return {shift(c, Dir::Eta, -1), shift(c, Dir::Xi, +1), shift(c, Dir::Eta, +1), shift(c, Dir::Xi, -1)};
}

Point3L DiscreteSurface::edge_ext(LatticeIndex to, LatticeIndex from) const {
    Point3L d = positions.at(to).cast<long double>() - positions.at(from).cast<long double>();
    if (residual.has(to)) d += residual.at(to).cast<long double>();
    if (residual.has(from)) d -= residual.at(from).cast<long double>();
    return d;
}

void DiscreteSurface::place(LatticeIndex i, LatticeIndex base, const Point3L& offset) {
    Point3L total = positions.at(base).cast<long double>() + offset;
    if (residual.has(base)) total += residual.at(base).cast<long double>();
    const Point3 hi = total.cast<double>();
    positions.set(i, hi);
    residual.set(i, (total - hi.cast<long double>()).cast<double>());
}

void DiscreteSurface::set(LatticeIndex i, const Point3& p) {
    positions.set(i, p);
    residual.erase(i);
}

std::vector<LatticeIndex> DiscreteSurface::complete_quads() const {
    std::vector<LatticeIndex> out;
    const int k = spec.k_r;
    for (int n = -k; n <= k; ++n)
        for (int m = -k; m <= k; ++m) {
            LatticeIndex c{m, n};
            if (slot_of(c) != Slot::QuadCenter) continue;
            auto sq = elementary_square(c);
            bool ok = true;
            for (auto& v : sq) ok = ok && positions.has(v);
            if (ok) out.push_back(c);
        }
    return out;
}

}  // namespace isogrow
