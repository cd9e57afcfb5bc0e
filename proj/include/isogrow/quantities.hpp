#pragma once

#include <string>

#include "isogrow/lattice.hpp"

namespace isogrow {

struct DiscreteQuantities {
    double eps = 0.0;
    XEdgeField<double> u_hat;
    YEdgeField<double> u_check;
    XEdgeField<Point3> a;
    YEdgeField<Point3> b;
    CenterField<Point3> N;
    CenterField<double> v, w, v_tilde, w_tilde;
    YEdgeField<double> k;
    XEdgeField<double> l;
    // Largest disagreement between the two expressions for v, w and for v~, w~.
    double vw_disagreement = 0.0;
    double tilde_disagreement = 0.0;
};

// Throws DegenerateEdge on a zero-length edge.
DiscreteQuantities extract(const DiscreteSurface& surface);

struct VW {
    double v = 0.0, w = 0.0;
};
struct Tilde {
    double vt = 0.0, wt = 0.0;
};
struct Mixed {
    double vt = 0.0, w = 0.0;
};

// z* = sqrt(1 - eps^2 z^2); throws StarOverflow when |eps z| >= 1.
double star(double z, double eps);

VW vw_from_tilde(double vt, double wt, double eps);
Tilde tilde_from_vw(double v, double w, double eps);
// Given v and w~, the unique v~ with sinh(eps v)/eps = v~ w~* / v~*, and the matching w.
Mixed mixed_pair_solve(double v, double wt, double eps);

struct FrameResiduals {
    double reconf_x = 0.0;  // |delta_x F - e^u_hat a|
    double reconf_y = 0.0;  // |delta_y F - e^u_check b|
    double recona = 0.0;    // delta_y a expansion
    double reconb = 0.0;    // delta_x b expansion
    double reconu = 0.0;    // delta_y u_hat = w - v, delta_x u_check = w + v
    double max() const;
};

FrameResiduals frame_relation_residuals(const DiscreteSurface& surface, const DiscreteQuantities& q);

struct GCResiduals {
    double r_gd1 = 0.0;
    double r_gd1a = 0.0;
    double r_gd2 = 0.0;
    double r_gd3 = 0.0;
    double r_defiso = 0.0;
};

// Evaluated at vertices where every term is available; correction terms are omitted.
GCResiduals gc_residuals(const DiscreteQuantities& q);

// One row per slot: m,n,slot,quantity,c0,c1,c2.
void write_quantities_csv(const DiscreteQuantities& q, const std::string& path);

}  // namespace isogrow
