#pragma once

#include <array>
#include <vector>

#include "isogrow/lattice.hpp"
#include "isogrow/smooth.hpp"

namespace isogrow {

// Dual one-form: x-edges e -> eps^2 e/|e|^2, y-edges e -> -eps^2 e/|e|^2, integrated over a
// breadth-first spanning tree from `base`, which is placed at the origin. Throws DegenerateEdge.
DiscreteSurface christoffel_discrete(const DiscreteSurface& surface, LatticeIndex base = {0, 0});

// Max over complete quads of |loop sum of the dual one-form| / max edge length in the loop.
double christoffel_closedness(const DiscreteSurface& surface);

struct DarbouxAudit {
    double cr_defect = 0.0;    // max relative |q - target| over edges, recomputed independently
    double loop_defect = 0.0;  // max |redundant prediction - stored| / local scale
    std::size_t edges = 0;
};

struct DarbouxResult {
    DiscreteSurface surface;
    DarbouxAudit audit;
};

// gamma = C/eps^2; x-edge quadruples get cross-ratio 1/gamma, y-edge quadruples -1/gamma.
// Breadth-first from `start`. Throws DegeneratePlane or StarOverflow (vanishing denominator).
DarbouxResult darboux_discrete(const DiscreteSurface& surface, const Point3& seed, double C,
                               LatticeIndex start = {0, 0});

DarbouxAudit darboux_audit(const DiscreteSurface& surface, const DiscreteSurface& plus, double C);

struct SmoothTransformOptions {
    double substep = 1e-3;
    double collapse_tol = 1e-9;  // Darboux: minimum |F+ - F|
    double fd_step = 1e-4;       // for v, w, k, l of the transformed surface
};

// Dual surface with F*(0,0) = 0; v, w, k, l by finite differences. Throws DegenerateMetric.
SmoothSurface christoffel_smooth(const SmoothSurface& surface, const SmoothTransformOptions& opt = {});

// Darboux transform with F+(0,0) = seed. Throws CollapsedPair.
SmoothSurface darboux_smooth(const SmoothSurface& surface, const Point3& seed, double C,
                             const SmoothTransformOptions& opt = {});

// Evaluators of transformed surfaces integrate x-then-y; this reports the max distance to y-then-x.
double path_defect(const SmoothSurface& transformed, const std::vector<std::array<double, 2>>& xy);

}  // namespace isogrow
