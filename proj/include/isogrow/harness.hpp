#pragma once

#include <string>
#include <vector>

#include "isogrow/bjorling.hpp"
#include "isogrow/smooth.hpp"

namespace isogrow {

struct ConvergenceReport {
    std::string surface;
    double target_h = 0.0;
    double h_common = 0.0;
    std::vector<double> eps_list;  // strictly decreasing
    std::vector<double> e_F, e_Fx, e_Fy, achieved_h;
    // Least-squares slope of log e against log eps; NaN with fewer than two entries.
    double order_F = 0.0, order_Fx = 0.0, order_Fy = 0.0;
};

double fit_order(const std::vector<double>& eps, const std::vector<double>& err);

// Per eps: sample the strip, grow to target_h, then compare at lattice points of
// Omega(r - eps_max/2, h_common - eps_max/2): F at vertices, delta_x F at x-edges against F_x,
// delta_y F at y-edges against F_y. Runs eps values concurrently, capped by ISOGROW_THREADS.
// Throws EmptyOverlap when h_common <= eps_max/2.
ConvergenceReport run_convergence(const BjorlingData& data, const SmoothSurface& reference,
                                  std::vector<double> eps_list, double target_h);

std::string report_csv(const ConvergenceReport& report);
std::string report_summary(const ConvergenceReport& report);
// Writes <prefix>.csv and <prefix>_summary.txt.
void emit_report(const ConvergenceReport& report, const std::string& prefix);

struct StripFidelity {
    double eps = 0.0;
    // Largest |v - v0|, |w~ - w0|, |k - k0|, |l - l0| over slots fixed by the strip.
    double dv = 0.0, dwt = 0.0, dk = 0.0, dl = 0.0;
    // Largest |f^eps - f|, |delta_x f^eps - e^u0 Psi0_1|, |delta_y f^eps - e^u0 Psi0_2| on the strip.
    double e_f = 0.0, e_fx = 0.0, e_fy = 0.0;
    double max_exact() const;
};

StripFidelity strip_fidelity(const CauchyData& cd, const BjorlingData& data, double eps);

int thread_cap();

}  // namespace isogrow
