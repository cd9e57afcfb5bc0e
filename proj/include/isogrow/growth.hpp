#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isogrow/bjorling.hpp"
#include "isogrow/lattice.hpp"

namespace isogrow {

inline constexpr double kMaxCompletionCondition = 1e8;

enum class DegeneracyKind { LowerTriple, UpperTriple, IllConditioned };

const char* degeneracy_name(DegeneracyKind k);

struct Degeneracy {
    LatticeIndex center;  // quad center of the offending triple
    DegeneracyKind kind;
};

struct GrowthResult {
    DiscreteSurface surface;
    double achieved_h_up = 0.0;
    double achieved_h_down = 0.0;
    std::optional<Degeneracy> stop_up, stop_down;

    double achieved_h() const { return achieved_h_up < achieved_h_down ? achieved_h_up : achieved_h_down; }
};

// Grows rows eta = eps, 3eps/2, ... <= target_h and eta = -eps/2, -eps, ... > -target_h.
// A row is committed only when every completion in it succeeds.
GrowthResult grow(const InitialStrip& strip, double target_h);

// Every collinear (T_xi^-1, T_eta^-1, T_xi) and (T_xi^-1, T_eta, T_xi) triple.
std::vector<Degeneracy> degeneracy_scan(const DiscreteSurface& surface);

}  // namespace isogrow
