#include "isogrow/growth.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "isogrow/error.hpp"

namespace isogrow {

const char* degeneracy_name(DegeneracyKind k) {
    switch (k) {
        case DegeneracyKind::LowerTriple: return "collinear_lower_triple";
        case DegeneracyKind::UpperTriple: return "collinear_upper_triple";
        case DegeneracyKind::IllConditioned: return "ill_conditioned_completion";
    }
    return "?";
}

namespace {

// Completes vertex row `s` (m+n = s). Returns the first degeneracy, leaving the surface untouched on failure.
std::optional<Degeneracy> complete_row(DiscreteSurface& surf, int s, bool up) {
    const auto& pos = surf.positions;
    const DomainSpec& spec = surf.spec;
    struct Pending {
        LatticeIndex idx, base;
        Point3L offset;
    };
    std::vector<Pending> row;
    const int k = spec.k_r;
    for (int m = -k; m <= k; ++m) {
        LatticeIndex p{m, s - m};
        if (slot_of(p) != Slot::Vertex || !spec.contains(p)) continue;
        LatticeIndex c = shift(p, Dir::Eta, up ? -1 : +1);
        LatticeIndex back = shift(c, Dir::Eta, up ? -1 : +1);
        LatticeIndex east = shift(c, Dir::Xi, +1), west = shift(c, Dir::Xi, -1);
        if (!pos.has(back) || !pos.has(east) || !pos.has(west)) continue;
        // Local coordinates around `back`; completion is translation invariant.
        const Point3L pb = Point3L::Zero(), pe = surf.edge_ext(east, back), pw = surf.edge_ext(west, back);
        const DegeneracyKind kind = up ? DegeneracyKind::LowerTriple : DegeneracyKind::UpperTriple;
        if (is_collinear(pw.cast<double>(), pb.cast<double>(), pe.cast<double>())) return Degeneracy{c, kind};
        const std::complex<long double> minus_one(-1.0L, 0.0L);
        CompletionL done = up ? complete_with_cross_ratio(std::array<Point3L, 3>{pb, pe, pw}, 3, minus_one)
                              : complete_with_cross_ratio(std::array<Point3L, 3>{pe, pb, pw}, 1, minus_one);
        if (!(done.condition <= kMaxCompletionCondition) || !done.point.allFinite())
            return Degeneracy{c, DegeneracyKind::IllConditioned};
        row.push_back({p, back, done.point});
    }
    for (auto& r : row) surf.place(r.idx, r.base, r.offset);
    return std::nullopt;
}

}  // namespace

GrowthResult grow(const InitialStrip& strip, double target_h) {
    const double eps = strip.eps;
    const double r = strip.spec.r;
    if (!(target_h <= r)) throw Error(ErrorCode::InvalidDomain, "target_h must not exceed r");
    const DomainSpec spec = DomainSpec::make(r, std::max(target_h, 0.5 * eps), eps);

    GrowthResult res;
    res.surface = DiscreteSurface(spec);
    strip.positions.for_each([&](LatticeIndex i, const Point3& p) {
        if (!spec.contains(i)) return;
        res.surface.positions.set(i, p);
        if (strip.residual.has(i)) res.surface.residual.set(i, strip.residual.at(i));
    });
    res.achieved_h_up = res.achieved_h_down = 0.5 * eps;

    for (int s = 4; s <= spec.s_hi; s += 2) {
        res.stop_up = complete_row(res.surface, s, true);
        if (res.stop_up) break;
        res.achieved_h_up = 0.25 * eps * s;
    }
    for (int s = -2; s >= spec.s_lo; s -= 2) {
        res.stop_down = complete_row(res.surface, s, false);
        if (res.stop_down) break;
        // eta > -h excludes the next row, but the reported height never exceeds the target
        res.achieved_h_down = std::min(target_h, 0.25 * eps * (-s) + 0.5 * eps);
    }
    return res;
}

std::vector<Degeneracy> degeneracy_scan(const DiscreteSurface& surface) {
    std::vector<Degeneracy> out;
    const auto& pos = surface.positions;
    const int k = surface.spec.k_r;
    for (int n = -k; n <= k; ++n)
        for (int m = -k; m <= k; ++m) {
            LatticeIndex c{m, n};
            if (slot_of(c) != Slot::QuadCenter) continue;
            LatticeIndex w = shift(c, Dir::Xi, -1), e = shift(c, Dir::Xi, +1);
            if (!pos.has(w) || !pos.has(e)) continue;
            LatticeIndex lo = shift(c, Dir::Eta, -1), hi = shift(c, Dir::Eta, +1);
            if (pos.has(lo) && is_collinear(pos.at(w), pos.at(lo), pos.at(e)))
                out.push_back({c, DegeneracyKind::LowerTriple});
            if (pos.has(hi) && is_collinear(pos.at(w), pos.at(hi), pos.at(e)))
                out.push_back({c, DegeneracyKind::UpperTriple});
        }
    return out;
}

}  // namespace isogrow
