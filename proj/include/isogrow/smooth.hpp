#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "isogrow/bjorling.hpp"
#include "isogrow/geometry.hpp"

namespace isogrow {

using SurfaceEval = std::function<Point3(double x, double y)>;
using ScalarEval = std::function<double(double x, double y)>;

// Evaluators take curvature-line coordinates (x, y); xi = (x-y)/2, eta = (x+y)/2.
struct SmoothSurface {
    std::string name;
    SurfaceEval F, F_x, F_y, N;
    ScalarEval u, v, w, k, l;
    SurfaceEval F_alt;  // path-integrated surfaces: F by the other integration order
    double r = 1.0;  // trusted on |xi| + |eta| <= r, |eta| <= h
    double h = 1.0;
};

// "cylinder" or "sphere_mercator".
SmoothSurface builtin_surface(const std::string& name);

struct InvariantReport {
    double conformality = 0.0;    // |F_x| - e^u, |F_y| - e^u, <F_x,F_y>
    double curvature_line = 0.0;  // <F_xy, N>
    double gauss = 0.0;           // -(u_xx + u_yy) - k l, with u_x = v + w, u_y = w - v
    double codazzi = 0.0;         // k_y - l (w - v), l_x - k (w + v)
    double u_compat = 0.0;        // u_x - (v + w), u_y - (w - v)
    double max() const;
};

// Derivatives by fourth-order central differences with the given step.
InvariantReport check_smooth_invariants(const SmoothSurface& s, const std::vector<std::array<double, 2>>& xy,
                                        double step = 1e-3);

// Fields (v, w, k, l) at one eta level on uniformly spaced xi nodes.
struct GCState {
    double eta = 0.0;
    std::vector<double> xi, v, w, k, l;
};

struct GCOptions {
    int modes = 48;              // Chebyshev degree in xi
    bool filter = true;
    double filter_alpha = 36.0;  // exp(-alpha (n/modes)^16) after every step
    double blowup_factor = 1e3;  // relative to max(1, initial sup norm)
};

using GCInit = std::function<std::array<double, 4>(double xi)>;

// Chebyshev coefficients of (v, w, k, l) on [-r, r] for levels eta_j = j * d_eta, j = -steps..steps.
class GCHistory {
public:
    GCHistory(double r, double h, int steps, int modes);

    double r() const { return r_; }
    double h() const { return h_; }
    int steps() const { return steps_; }
    int modes() const { return modes_; }
    double d_eta() const { return h_ / steps_; }
    double eta(int j) const { return j * d_eta(); }

    std::array<double, 4> eval(int j, double xi) const;
    // Lagrange interpolation over the six nearest levels.
    std::array<double, 4> eval_at(double xi, double eta) const;
    GCState state(int j, int nodes = 512) const;

    Eigen::Matrix<double, Eigen::Dynamic, 4>& coeffs(int j) { return coeffs_[j + steps_]; }
    const Eigen::Matrix<double, Eigen::Dynamic, 4>& coeffs(int j) const { return coeffs_[j + steps_]; }

    // Columns: eta, xi, v, w, k, l; every `level_stride`-th level.
    void write_csv(const std::string& path, int nodes = 512, int level_stride = 1) const;

private:
    double r_, h_;
    int steps_, modes_;
    std::vector<Eigen::Matrix<double, Eigen::Dynamic, 4>> coeffs_;
};

// Integrates eta in [-h, h] from the Cauchy data on eta = 0; `steps` per direction is rounded up to even.
// Throws BlowUp when the sup norm exceeds the configured factor.
GCHistory solve_gc_cauchy(const GCInit& init, double r, double h, int steps, const GCOptions& opt = {});
GCHistory solve_gc_cauchy(const CauchyData& init, double r, double h, int steps, const GCOptions& opt = {});

struct Anchor {
    Point3 F = Point3::Zero();
    Frame3 Psi = Frame3::Identity();
    double u = 0.0;
};

Anchor anchor_from(const CauchyData& cd);

struct ReconstructOptions {
    int reortho_every = 16;
    double xi_substep = 2e-3;
    double drift_limit = 1e-6;
};

struct ReconstructDiagnostics {
    double path_defect = 0.0;  // |F| difference between the two integration orders
    double frame_drift = 0.0;  // max |Psi^T Psi - I| seen before re-orthonormalization
    double det_drift = 0.0;    // max |det Psi - 1| seen before re-orthonormalization
};

class Reconstruction {
public:
    struct Grid;

    explicit Reconstruction(std::shared_ptr<const Grid> g) : grid_(std::move(g)) {}

    // Evaluators interpolate the stored grid: barycentric in xi, six-point Lagrange in eta.
    SmoothSurface surface() const;
    const ReconstructDiagnostics& diagnostics() const;
    // Grid nodes for direct sampling.
    const std::vector<double>& xi_nodes() const;
    const std::vector<double>& eta_levels() const;
    Point3 F_node(std::size_t level, std::size_t node) const;

private:
    std::shared_ptr<const Grid> grid_;
};

// Path one: eta at xi = 0, then xi along every level. Path two: xi at eta = 0, then eta at every node.
// Throws FrameDrift when orthogonality drifts beyond the limit between re-orthonormalizations.
Reconstruction reconstruct_surface(const GCHistory& states, const Anchor& anchor, const ReconstructOptions& opt = {});

}  // namespace isogrow
