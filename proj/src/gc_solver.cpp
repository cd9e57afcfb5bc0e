#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/SVD>

#include "isogrow/error.hpp"
#include "isogrow/smooth.hpp"

namespace isogrow {

namespace {

using Coeffs = Eigen::Matrix<double, Eigen::Dynamic, 4>;
using Values = Eigen::Matrix<double, Eigen::Dynamic, 4>;

double clenshaw(const double* c, int stride, int n, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = n - 1; k >= 1; --k) {
        double b0 = 2.0 * x * b1 - b2 + c[k * stride];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c[0];
}

// Degree-M coefficients, products evaluated on 2M+1 Lobatto points (exact for quadratic terms).
struct Cheb {
    int M, P;
    double r;
    Eigen::MatrixXd E;     // values on the fine grid from coefficients
    Eigen::MatrixXd Proj;  // coefficients from fine-grid values
    Eigen::VectorXd xi;    // fine-grid nodes

    Cheb(int modes, double radius) : M(modes), P(2 * modes), r(radius) {
        const double pi = std::numbers::pi;
        E.resize(P + 1, M + 1);
        Proj.resize(M + 1, P + 1);
        xi.resize(P + 1);
        for (int j = 0; j <= P; ++j) {
            xi(j) = r * std::cos(pi * j / P);
            for (int k = 0; k <= M; ++k) E(j, k) = std::cos(pi * double(j) * k / P);
        }
        for (int k = 0; k <= M; ++k)
            for (int j = 0; j <= P; ++j) {
                double wj = (j == 0 || j == P) ? 0.5 : 1.0;
                Proj(k, j) = (2.0 / P) * wj * E(j, k) * (k == 0 ? 0.5 : 1.0);
            }
    }

    Coeffs deriv(const Coeffs& c) const {
        Coeffs d = Coeffs::Zero(M + 1, 4);
        for (int col = 0; col < 4; ++col) {
            double dk1 = 0.0, dk2 = 0.0;  // d_{k+1}, d_{k+2}
            for (int k = M; k >= 1; --k) {
                double dk = dk2 + 2.0 * k * c(k, col);  // d_{k-1}
                d(k - 1, col) = dk;
                dk2 = dk1;
                dk1 = dk;
            }
            d(0, col) *= 0.5;
        }
        return d / r;
    }

    Coeffs rhs(const Coeffs& s) const {
        Coeffs d = deriv(s);
        Values val = E * s;
        Eigen::VectorXd V = val.col(0), W = val.col(1), K = val.col(2), L = val.col(3);
        Eigen::VectorXd kl = K.cwiseProduct(L);
        Eigen::VectorXd lwv = 2.0 * L.cwiseProduct(W - V);
        Eigen::VectorXd kwv = 2.0 * K.cwiseProduct(W + V);
        Coeffs out(M + 1, 4);
        out.col(0) = d.col(1);
        out.col(1) = -d.col(0) - Proj * kl;
        out.col(2) = d.col(2) + Proj * lwv;
        out.col(3) = -d.col(3) + Proj * kwv;
        return out;
    }

    double sup(const Coeffs& s) const { return (E * s).cwiseAbs().maxCoeff(); }
};

}  // namespace

GCHistory::GCHistory(double r, double h, int steps, int modes)
    : r_(r), h_(h), steps_(steps), modes_(modes), coeffs_(2 * steps + 1, Coeffs::Zero(modes + 1, 4)) {}

std::array<double, 4> GCHistory::eval(int j, double xi) const {
    const Coeffs& c = coeffs(j);
    double x = std::clamp(xi / r_, -1.0, 1.0);
    std::array<double, 4> out;
    for (int col = 0; col < 4; ++col) out[col] = clenshaw(c.data() + col * c.rows(), 1, int(c.rows()), x);
    return out;
}

std::array<double, 4> GCHistory::eval_at(double xi, double eta) const {
    double t = eta / d_eta();
    int n = 2 * steps_ + 1;
    int pts = std::min(6, n);
    int i0 = int(std::floor(t)) - 2 + steps_;
    i0 = std::clamp(i0, 0, n - pts);
    std::array<double, 4> out{0, 0, 0, 0};
    for (int a = 0; a < pts; ++a) {
        double wa = 1.0;
        for (int b = 0; b < pts; ++b)
            if (b != a) wa *= (t - (i0 + b - steps_)) / double(a - b);
        auto f = eval(i0 + a - steps_, xi);
        for (int c = 0; c < 4; ++c) out[c] += wa * f[c];
    }
    return out;
}

GCState GCHistory::state(int j, int nodes) const {
    GCState s;
    s.eta = eta(j);
    for (int i = 0; i < nodes; ++i) {
        double xi = -r_ + 2.0 * r_ * i / (nodes - 1);
        auto f = eval(j, xi);
        s.xi.push_back(xi);
        s.v.push_back(f[0]);
        s.w.push_back(f[1]);
        s.k.push_back(f[2]);
        s.l.push_back(f[3]);
    }
    return s;
}

void GCHistory::write_csv(const std::string& path, int nodes, int level_stride) const {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error(ErrorCode::Io, "cannot open " + path);
    std::fprintf(fp, "eta,xi,v,w,k,l\n");
    for (int j = -steps_; j <= steps_; j += std::max(1, level_stride)) {
        GCState s = state(j, nodes);
        for (std::size_t i = 0; i < s.xi.size(); ++i)
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.eta, s.xi[i], s.v[i], s.w[i], s.k[i], s.l[i]);
    }
    std::fclose(fp);
}

GCHistory solve_gc_cauchy(const GCInit& init, double r, double h, int steps, const GCOptions& opt) {
    if (!(r > 0) || !(h > 0) || steps < 1 || opt.modes < 4)
        throw Error(ErrorCode::InvalidDomain, "solve_gc_cauchy needs r > 0, h > 0, steps >= 1, modes >= 4");
    if (steps % 2) ++steps;
    Cheb ch(opt.modes, r);
    GCHistory hist(r, h, steps, opt.modes);

    Values v0(ch.P + 1, 4);
    for (int j = 0; j <= ch.P; ++j) {
        auto f = init(ch.xi(j));
        for (int c = 0; c < 4; ++c) v0(j, c) = f[c];
    }
    if (!v0.allFinite()) throw Error(ErrorCode::BlowUp, "initial data not finite");
    Coeffs c0 = ch.Proj * v0;
    hist.coeffs(0) = c0;

    Eigen::VectorXd sigma = Eigen::VectorXd::Ones(opt.modes + 1);
    if (opt.filter)
        for (int k = 0; k <= opt.modes; ++k)
            sigma(k) = std::exp(-opt.filter_alpha * std::pow(double(k) / opt.modes, 16));

    double limit = opt.blowup_factor * std::max(1.0, v0.cwiseAbs().maxCoeff());
    double dt = h / steps;
    for (int dir : {+1, -1}) {
        Coeffs s = c0;
        double step = dir * dt;
        for (int j = 1; j <= steps; ++j) {
            Coeffs k1 = ch.rhs(s);
            Coeffs k2 = ch.rhs(s + 0.5 * step * k1);
            Coeffs k3 = ch.rhs(s + 0.5 * step * k2);
            Coeffs k4 = ch.rhs(s + step * k3);
            s += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s = sigma.asDiagonal() * s;
            double sup = s.allFinite() ? ch.sup(s) : INFINITY;
            if (!(sup <= limit)) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "sup norm %.3g exceeds %.3g at eta = %.6g", sup, limit, dir * j * dt);
                throw Error(ErrorCode::BlowUp, buf);
            }
            hist.coeffs(dir * j) = s;
        }
    }
    return hist;
}

GCHistory solve_gc_cauchy(const CauchyData& init, double r, double h, int steps, const GCOptions& opt) {
    return solve_gc_cauchy(
        [&](double xi) {
            CauchySample c = init.at(xi);
            return std::array<double, 4>{c.v, c.w, c.k, c.l};
        },
        r, h, steps, opt);
}

Anchor anchor_from(const CauchyData& cd) {
    CauchySample c = cd.at(0.0);
    return Anchor{cd.data().f(0.0), c.Psi, c.u};
}

// ---- reconstruction ----

namespace {

using Rec = Eigen::Matrix<double, 13, 1>;  // u, Psi (column-major), F

Rec pack(double u, const Frame3& Psi, const Point3& F) {
    Rec y;
    y(0) = u;
    y.segment<9>(1) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Psi.data());
    y.segment<3>(10) = F;
    return y;
}

Frame3 frame_of(const Rec& y) { return Eigen::Map<const Frame3>(y.data() + 1); }

Rec deriv(const Rec& y, const std::array<double, 4>& f, bool along_xi) {
    double v = f[0], w = f[1], k = f[2], l = f[3];
    Frame3 A;
    if (along_xi)
        A << 0, 2 * w, -k, -2 * w, 0, l, k, -l, 0;
    else
        A << 0, -2 * v, -k, 2 * v, 0, -l, k, l, 0;
    Frame3 Psi = frame_of(y);
    Frame3 dPsi = Psi * A;
    double eu = std::exp(y(0));
    Point3 dF = along_xi ? Point3(eu * (Psi.col(0) - Psi.col(1))) : Point3(eu * (Psi.col(0) + Psi.col(1)));
    return pack(along_xi ? 2 * v : 2 * w, dPsi, dF);
}

Rec rk4(const Rec& y, double hstep, const std::array<double, 4>& f0, const std::array<double, 4>& fm,
        const std::array<double, 4>& f1, bool along_xi) {
    Rec k1 = deriv(y, f0, along_xi);
    Rec k2 = deriv(y + 0.5 * hstep * k1, fm, along_xi);
    Rec k3 = deriv(y + 0.5 * hstep * k2, fm, along_xi);
    Rec k4 = deriv(y + hstep * k3, f1, along_xi);
    return y + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Orthonormalizer {
    int every;
    double limit;
    ReconstructDiagnostics* diag;
    int count = 0;

    void step(Rec& y) {
        if (++count % every) return;
        Frame3 Psi = frame_of(y);
        double drift = (Psi.transpose() * Psi - Frame3::Identity()).cwiseAbs().maxCoeff();
        diag->frame_drift = std::max(diag->frame_drift, drift);
        diag->det_drift = std::max(diag->det_drift, std::abs(Psi.determinant() - 1.0));
        if (!(drift <= limit)) throw Error(ErrorCode::FrameDrift, "frame orthogonality drift " + std::to_string(drift));
        Eigen::JacobiSVD<Frame3> svd(Psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Frame3 Q = svd.matrixU() * svd.matrixV().transpose();
        y.segment<9>(1) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Q.data());
    }
};

}  // namespace

struct Reconstruction::Grid {
    std::string name;
    double r = 1.0, h = 1.0;
    std::vector<double> xi;        // Chebyshev-Lobatto nodes, descending
    std::vector<double> bary;      // barycentric weights
    std::vector<double> eta;       // stored levels, ascending
    std::vector<std::vector<Rec>> rec;  // [level][node]
    std::shared_ptr<const GCHistory> hist;
    ReconstructDiagnostics diag;

    Rec eval(double x, double e) const {
        int nl = int(eta.size());
        int pts = std::min(6, nl);
        double de = eta[1] - eta[0];
        double t = (e - eta[0]) / de;
        int i0 = std::clamp(int(std::floor(t)) - 2, 0, nl - pts);
        // barycentric weights in xi, shared by all levels
        std::vector<double> bw(xi.size());
        int exact = -1;
        double sum = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            double d = x - xi[i];
            if (d == 0.0) {
                exact = int(i);
                break;
            }
            bw[i] = bary[i] / d;
            sum += bw[i];
        }
        Rec out = Rec::Zero();
        for (int a = 0; a < pts; ++a) {
            double wa = 1.0;
            for (int b = 0; b < pts; ++b)
                if (b != a) wa *= (t - (i0 + b)) / double(a - b);
            const auto& row = rec[i0 + a];
            Rec val = Rec::Zero();
            if (exact >= 0) {
                val = row[exact];
            } else {
                for (std::size_t i = 0; i < xi.size(); ++i) val += bw[i] * row[i];
                val /= sum;
            }
            out += wa * val;
        }
        return out;
    }
};

const ReconstructDiagnostics& Reconstruction::diagnostics() const { return grid_->diag; }
const std::vector<double>& Reconstruction::xi_nodes() const { return grid_->xi; }
const std::vector<double>& Reconstruction::eta_levels() const { return grid_->eta; }
Point3 Reconstruction::F_node(std::size_t level, std::size_t node) const {
    return grid_->rec.at(level).at(node).segment<3>(10);
}

SmoothSurface Reconstruction::surface() const {
    auto g = grid_;
    SmoothSurface s;
    s.name = g->name;
    s.r = g->r;
    s.h = g->h;
    auto at = [g](double x, double y) { return g->eval(0.5 * (x - y), 0.5 * (x + y)); };
    s.F = [at](double x, double y) { return Point3(at(x, y).segment<3>(10)); };
    s.F_x = [at](double x, double y) {
        Rec r = at(x, y);
        return Point3(std::exp(r(0)) * frame_of(r).col(0));
    };
    s.F_y = [at](double x, double y) {
        Rec r = at(x, y);
        return Point3(std::exp(r(0)) * frame_of(r).col(1));
    };
    s.N = [at](double x, double y) { return Point3(frame_of(at(x, y)).col(2)); };
    s.u = [at](double x, double y) { return at(x, y)(0); };
    auto field = [g](int c) {
        return [g, c](double x, double y) { return g->hist->eval_at(0.5 * (x - y), 0.5 * (x + y))[c]; };
    };
    s.v = field(0);
    s.w = field(1);
    s.k = field(2);
    s.l = field(3);
    return s;
}

Reconstruction reconstruct_surface(const GCHistory& states, const Anchor& anchor, const ReconstructOptions& opt) {
    auto g = std::make_shared<Reconstruction::Grid>();
    g->hist = std::make_shared<GCHistory>(states);
    const GCHistory& H = *g->hist;
    g->name = "reconstructed";
    g->r = H.r();
    g->h = H.h();
    const int S = H.steps();
    const int Q = H.modes();
    const double pi = std::numbers::pi;
    for (int i = 0; i <= Q; ++i) {
        g->xi.push_back(H.r() * std::cos(pi * i / Q));
        double b = (i % 2) ? -1.0 : 1.0;
        if (i == 0 || i == Q) b *= 0.5;
        g->bary.push_back(b);
    }
    // Stored levels j = -S, -S+2, ..., S (S is even).
    std::vector<int> levels;
    for (int j = -S; j <= S; j += 2) {
        levels.push_back(j);
        g->eta.push_back(H.eta(j));
    }
    const int NL = int(levels.size());
    const int mid = NL / 2;  // level j = 0
    const Rec y0 = pack(anchor.u, anchor.Psi, anchor.F);
    const double de = H.d_eta();

    // Integrates along eta through stored levels, starting from level `mid`.
    auto along_eta = [&](const Rec& start, auto fields_at, std::vector<Rec>& out) {
        out.assign(NL, Rec::Zero());
        out[mid] = start;
        for (int dir : {+1, -1}) {
            Rec y = start;
            Orthonormalizer orth{opt.reortho_every, opt.drift_limit, &g->diag};
            for (int li = mid; li + dir >= 0 && li + dir < NL; li += dir) {
                int j = levels[li];
                y = rk4(y, 2 * dir * de, fields_at(j), fields_at(j + dir), fields_at(j + 2 * dir), false);
                orth.step(y);
                out[li + dir] = y;
            }
        }
    };
    // Integrates along xi at level j from xi = 0 to every node.
    auto along_xi = [&](const Rec& start, int j, std::vector<Rec>& out) {
        out.assign(g->xi.size(), Rec::Zero());
        for (int dir : {+1, -1}) {
            Rec y = start;
            double x = 0.0;
            Orthonormalizer orth{opt.reortho_every, opt.drift_limit, &g->diag};
            // nodes ordered by distance from 0 in direction dir
            std::vector<int> order;
            for (int i = 0; i <= Q; ++i)
                if (dir > 0 ? g->xi[i] > 0 : g->xi[i] <= 0) order.push_back(i);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return std::abs(g->xi[a]) < std::abs(g->xi[b]); });
            for (int i : order) {
                double target = g->xi[i];
                int n = std::max(1, int(std::ceil(std::abs(target - x) / opt.xi_substep)));
                double hs = (target - x) / n;
                for (int s = 0; s < n; ++s) {
                    y = rk4(y, hs, H.eval(j, x), H.eval(j, x + 0.5 * hs), H.eval(j, x + hs), true);
                    x += hs;
                    orth.step(y);
                }
                x = target;
                out[i] = y;
            }
        }
    };

    // Path one: axis xi = 0 along eta, then along xi on every level.
    std::vector<Rec> axis;
    along_eta(y0, [&](int j) { return H.eval(j, 0.0); }, axis);
    g->rec.resize(NL);
    for (int li = 0; li < NL; ++li) along_xi(axis[li], levels[li], g->rec[li]);

    // Path two: xi at eta = 0, then eta at every node.
    std::vector<Rec> base;
    along_xi(y0, 0, base);
    for (int i = 0; i <= Q; ++i) {
        std::vector<std::array<double, 4>> col(2 * S + 1);
        for (int j = -S; j <= S; ++j) col[j + S] = H.eval(j, g->xi[i]);
        std::vector<Rec> line;
        along_eta(base[i], [&](int j) { return col[j + S]; }, line);
        for (int li = 0; li < NL; ++li)
            g->diag.path_defect =
                std::max(g->diag.path_defect, (line[li].segment<3>(10) - g->rec[li][i].segment<3>(10)).norm());
    }
    return Reconstruction(g);
}

}  // namespace isogrow
