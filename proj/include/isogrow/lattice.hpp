#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "isogrow/error.hpp"
#include "isogrow/geometry.hpp"

namespace isogrow {

// x = m*eps/2, y = n*eps/2, xi = (m-n)*eps/4, eta = (m+n)*eps/4.
struct LatticeIndex {
    int m = 0;
    int n = 0;
    friend bool operator==(const LatticeIndex& a, const LatticeIndex& b) { return a.m == b.m && a.n == b.n; }
    friend bool operator!=(const LatticeIndex& a, const LatticeIndex& b) { return !(a == b); }
};

std::string to_string(const LatticeIndex& i);

// Slot role follows the parity pair (m mod 2, n mod 2).
enum class Slot { Vertex, QuadCenter, XEdge, YEdge };
enum class Dir { X, Y, Xi, Eta };

const char* slot_name(Slot s);

constexpr Slot slot_of(LatticeIndex i) {
    bool mo = (i.m & 1) != 0, no = (i.n & 1) != 0;
    if (!mo && !no) return Slot::Vertex;
    if (mo && no) return Slot::QuadCenter;
    return mo ? Slot::XEdge : Slot::YEdge;
}

constexpr int parity_m(Slot s) { return (s == Slot::QuadCenter || s == Slot::XEdge) ? 1 : 0; }
constexpr int parity_n(Slot s) { return (s == Slot::QuadCenter || s == Slot::YEdge) ? 1 : 0; }

constexpr Slot slot_from_parity(int pm, int pn) {
    if (pm == 0 && pn == 0) return Slot::Vertex;
    if (pm == 1 && pn == 1) return Slot::QuadCenter;
    return pm == 1 ? Slot::XEdge : Slot::YEdge;
}

// Slot reached from kind `s` by one shift in `d`; also the slot of diff results.
constexpr Slot shifted_slot(Slot s, Dir d) {
    int pm = parity_m(s), pn = parity_n(s);
    if (d == Dir::X || d == Dir::Xi || d == Dir::Eta) pm ^= 1;
    if (d == Dir::Y || d == Dir::Xi || d == Dir::Eta) pn ^= 1;
    return slot_from_parity(pm, pn);
}

constexpr LatticeIndex shift(LatticeIndex i, Dir d, int sign = 1) {
    switch (d) {
        case Dir::X: return {i.m + sign, i.n};
        case Dir::Y: return {i.m, i.n + sign};
        case Dir::Xi: return {i.m + sign, i.n - sign};
        case Dir::Eta: return {i.m + sign, i.n + sign};
    }
    return i;
}

// Omega(r,h): |xi|+|eta| <= r and -h < eta <= h, decided on integers.
struct DomainSpec {
    double r = 1.0;
    double h = 0.5;
    double eps = 0.1;
    int k_r = 0;      // max(|m|,|n|) <= k_r
    int s_lo = 0;     // s_lo <= m+n
    int s_hi = 0;     // m+n <= s_hi

    // Requires r > 0, 0 < h <= r, 0 < eps <= 2h (the strip Omega(r, eps/2) is admissible).
    static DomainSpec make(double r, double h, double eps);

    bool contains(LatticeIndex i) const {
        return std::abs(i.m) <= k_r && std::abs(i.n) <= k_r && i.m + i.n >= s_lo && i.m + i.n <= s_hi;
    }
    double x(LatticeIndex i) const { return 0.5 * eps * i.m; }
    double y(LatticeIndex i) const { return 0.5 * eps * i.n; }
    double xi(LatticeIndex i) const { return 0.25 * eps * (i.m - i.n); }
    double eta(LatticeIndex i) const { return 0.25 * eps * (i.m + i.n); }
};

// (T_eta^-1 c, T_xi c, T_eta c, T_xi^-1 c); throws WrongParity unless c is a quad center.
std::array<LatticeIndex, 4> elementary_square(LatticeIndex center);

template <class T, Slot K>
class StaggeredField {
public:
    static constexpr Slot kind = K;

    StaggeredField() = default;
    explicit StaggeredField(const DomainSpec& spec) : spec_(spec) {
        m0_ = first_with_parity(-spec.k_r, parity_m(K));
        n0_ = first_with_parity(-spec.k_r, parity_n(K));
        cm_ = m0_ <= spec.k_r ? (spec.k_r - m0_) / 2 + 1 : 0;
        cn_ = n0_ <= spec.k_r ? (spec.k_r - n0_) / 2 + 1 : 0;
        values_.resize(static_cast<std::size_t>(cm_) * cn_);
        mask_.assign(values_.size(), 0);
    }

    const DomainSpec& spec() const { return spec_; }
    double eps() const { return spec_.eps; }

    bool has(LatticeIndex i) const {
        long k = slot(i);
        return k >= 0 && mask_[k];
    }

    const T& at(LatticeIndex i) const {
        long k = checked_slot(i);
        if (!mask_[k]) throw Error(ErrorCode::OutOfDomain, "no value stored at " + to_string(i));
        return values_[k];
    }

    void set(LatticeIndex i, const T& v) {
        long k = checked_slot(i);
        if (!spec_.contains(i)) throw Error(ErrorCode::OutOfDomain, to_string(i) + " is outside the domain");
        if (!mask_[k]) ++count_;
        values_[k] = v;
        mask_[k] = 1;
    }

    void erase(LatticeIndex i) {
        long k = slot(i);
        if (k >= 0 && mask_[k]) {
            mask_[k] = 0;
            --count_;
        }
    }

    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    // Deterministic order: n ascending, then m ascending.
    template <class Fn>
    void for_each(Fn&& fn) const {
        for (int j = 0; j < cn_; ++j)
            for (int i = 0; i < cm_; ++i) {
                std::size_t k = static_cast<std::size_t>(j) * cm_ + i;
                if (mask_[k]) fn(LatticeIndex{m0_ + 2 * i, n0_ + 2 * j}, values_[k]);
            }
    }

    std::vector<LatticeIndex> indices() const {
        std::vector<LatticeIndex> out;
        out.reserve(count_);
        for_each([&](LatticeIndex i, const T&) { out.push_back(i); });
        return out;
    }

private:
    static int first_with_parity(int lo, int p) { return ((lo % 2) + 2) % 2 == p ? lo : lo + 1; }

    long slot(LatticeIndex i) const {
        if (slot_of(i) != K) return -1;
        int a = (i.m - m0_) / 2, b = (i.n - n0_) / 2;
        if (i.m < m0_ || i.n < n0_ || a >= cm_ || b >= cn_) return -1;
        return static_cast<long>(b) * cm_ + a;
    }

    long checked_slot(LatticeIndex i) const {
        if (slot_of(i) != K)
            throw Error(ErrorCode::WrongParity,
                        to_string(i) + " is a " + slot_name(slot_of(i)) + " slot, field holds " + slot_name(K));
        long k = slot(i);
        if (k < 0) throw Error(ErrorCode::OutOfDomain, to_string(i) + " is outside the lattice box");
        return k;
    }

    DomainSpec spec_{};
    int m0_ = 0, n0_ = 0, cm_ = 0, cn_ = 0;
    std::vector<T> values_;
    std::vector<std::uint8_t> mask_;
    std::size_t count_ = 0;
};

template <class T> using VertexField = StaggeredField<T, Slot::Vertex>;
template <class T> using CenterField = StaggeredField<T, Slot::QuadCenter>;
template <class T> using XEdgeField = StaggeredField<T, Slot::XEdge>;
template <class T> using YEdgeField = StaggeredField<T, Slot::YEdge>;

// Central difference (T_d f - T_d^-1 f)/eps; `at` must be of kind shifted_slot(K, d).
template <class T, Slot K>
T diff(const StaggeredField<T, K>& f, Dir d, LatticeIndex at) {
    if (slot_of(at) != shifted_slot(K, d))
        throw Error(ErrorCode::WrongParity, "diff evaluated at " + to_string(at) + " of the wrong slot kind");
    T plus = f.at(shift(at, d, +1));
    T minus = f.at(shift(at, d, -1));
    return (plus - minus) / f.eps();
}

template <class T, Slot K>
bool diff_defined(const StaggeredField<T, K>& f, Dir d, LatticeIndex at) {
    return f.has(shift(at, d, +1)) && f.has(shift(at, d, -1));
}

// Vertex positions carry a compensated low-order part so that edge vectors
// are accurate relative to their own length, not to |F|.
struct DiscreteSurface {
    double eps = 0.0;
    DomainSpec spec;
    VertexField<Point3> positions;
    VertexField<Point3> residual;  // optional low-order parts; absent entries are zero

    DiscreteSurface() = default;
    explicit DiscreteSurface(const DomainSpec& s) : eps(s.eps), spec(s), positions(s), residual(s) {}

    // position(to) - position(from), including low-order parts.
    Point3 edge(LatticeIndex to, LatticeIndex from) const { return edge_ext(to, from).cast<double>(); }
    Point3L edge_ext(LatticeIndex to, LatticeIndex from) const;
    // Stores position(base) + offset as a rounded value plus its low-order part.
    void place(LatticeIndex i, LatticeIndex base, const Point3L& offset);
    void place(LatticeIndex i, LatticeIndex base, const Point3& offset) { place(i, base, Point3L(offset.cast<long double>())); }
    // Plain assignment; drops any low-order part at i.
    void set(LatticeIndex i, const Point3& p);

    // Quad centers whose four vertices are all present.
    std::vector<LatticeIndex> complete_quads() const;
};

}  // namespace isogrow
