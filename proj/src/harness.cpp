#include "isogrow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <thread>

#include "isogrow/error.hpp"
#include "isogrow/growth.hpp"
#include "isogrow/quantities.hpp"

namespace isogrow {

int thread_cap() {
    int cap = int(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("ISOGROW_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) cap = v;
    }
    return cap;
}

double fit_order(const std::vector<double>& eps, const std::vector<double>& err) {
    std::size_t n = std::min(eps.size(), err.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::log(eps[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

Point3 vertex(const DiscreteSurface& s, LatticeIndex i) {
    Point3L p = s.positions.at(i).cast<long double>();
    if (s.residual.has(i)) p += s.residual.at(i).cast<long double>();
    return p.cast<double>();
}

struct Errors {
    double e_F = 0, e_Fx = 0, e_Fy = 0;
};

Errors measure(const DiscreteSurface& s, const SmoothSurface& ref, double r_eff, double h_eff) {
    Errors e;
    const DomainSpec& d = s.spec;
    auto inside = [&](LatticeIndex i) {
        double xi = d.xi(i), eta = d.eta(i);
        return std::abs(xi) + std::abs(eta) <= r_eff + 1e-12 && eta <= h_eff + 1e-12 && eta > -h_eff + 1e-12;
    };
    for (int m = -d.k_r; m <= d.k_r; ++m)
        for (int n = -d.k_r; n <= d.k_r; ++n) {
            LatticeIndex i{m, n};
            if (!inside(i)) continue;
            double x = d.x(i), y = d.y(i);
            switch (slot_of(i)) {
                case Slot::Vertex:
                    if (s.positions.has(i)) e.e_F = std::max(e.e_F, (vertex(s, i) - ref.F(x, y)).norm());
                    break;
                case Slot::XEdge: {
                    LatticeIndex a{m - 1, n}, b{m + 1, n};
                    if (s.positions.has(a) && s.positions.has(b))
                        e.e_Fx = std::max(e.e_Fx, (s.edge(b, a) / s.eps - ref.F_x(x, y)).norm());
                    break;
                }
                case Slot::YEdge: {
                    LatticeIndex a{m, n - 1}, b{m, n + 1};
                    if (s.positions.has(a) && s.positions.has(b))
                        e.e_Fy = std::max(e.e_Fy, (s.edge(b, a) / s.eps - ref.F_y(x, y)).norm());
                    break;
                }
                case Slot::QuadCenter: break;
            }
        }
    return e;
}

// Runs jobs in index order with at most `cap` in flight; results keep their index.
template <class T>
std::vector<T> run_capped(std::size_t n, const std::function<T(std::size_t)>& job) {
    std::vector<T> out(n);
    std::size_t cap = std::size_t(thread_cap());
    for (std::size_t start = 0; start < n; start += cap) {
        std::vector<std::future<T>> batch;
        for (std::size_t i = start; i < std::min(n, start + cap); ++i)
            batch.push_back(std::async(cap > 1 ? std::launch::async : std::launch::deferred, job, i));
        for (std::size_t i = 0; i < batch.size(); ++i) out[start + i] = batch[i].get();
    }
    return out;
}

}  // namespace

ConvergenceReport run_convergence(const BjorlingData& data, const SmoothSurface& reference,
                                  std::vector<double> eps_list, double target_h) {
    std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw Error(ErrorCode::InvalidDomain, "eps list must not contain duplicates");
    ConvergenceReport rep;
    rep.surface = data.name;
    rep.target_h = target_h;
    rep.eps_list = eps_list;
    if (eps_list.empty()) {
        rep.order_F = rep.order_Fx = rep.order_Fy = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    for (double e : eps_list)
        if (!(e > 0) || !(e < target_h))
            throw Error(ErrorCode::InvalidDomain, "each eps must satisfy 0 < eps < target_h");

    CauchyData cd = derive_cauchy_data(data);
    auto grown = run_capped<GrowthResult>(eps_list.size(), [&](std::size_t i) {
        return grow(sample_initial_strip(cd, data, eps_list[i]), target_h);
    });

    const double eps_max = eps_list.front();
    rep.h_common = target_h;
    for (const auto& g : grown) {
        rep.achieved_h.push_back(g.achieved_h());
        rep.h_common = std::min(rep.h_common, g.achieved_h());
    }
    if (rep.h_common <= 0.5 * eps_max)
        throw Error(ErrorCode::EmptyOverlap, "common grown height " + std::to_string(rep.h_common) +
                                                 " does not exceed eps_max/2");
    const double r_eff = data.r - 0.5 * eps_max, h_eff = rep.h_common - 0.5 * eps_max;
    auto errs = run_capped<Errors>(grown.size(),
                                   [&](std::size_t i) { return measure(grown[i].surface, reference, r_eff, h_eff); });
    for (const auto& e : errs) {
        rep.e_F.push_back(e.e_F);
        rep.e_Fx.push_back(e.e_Fx);
        rep.e_Fy.push_back(e.e_Fy);
    }
    rep.order_F = fit_order(rep.eps_list, rep.e_F);
    rep.order_Fx = fit_order(rep.eps_list, rep.e_Fx);
    rep.order_Fy = fit_order(rep.eps_list, rep.e_Fy);
    return rep;
}

std::string report_csv(const ConvergenceReport& r) {
    std::string out = "eps,e_F,e_Fx,e_Fy,achieved_h\n";
    char buf[256];
    for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.8e,%.8e,%.8e,%.8e,%.8e\n", r.eps_list[i], r.e_F[i], r.e_Fx[i], r.e_Fy[i],
                      r.achieved_h[i]);
        out += buf;
    }
    return out;
}

std::string report_summary(const ConvergenceReport& r) {
    char buf[256];
    std::string out = "surface: " + r.surface + "\n";
    std::snprintf(buf, sizeof buf, "target_h: %.6g\nh_common: %.6g\n", r.target_h, r.h_common);
    out += buf;
    auto order = [](double o) {
        if (std::isnan(o)) return std::string("nan");
        char b[32];
        std::snprintf(b, sizeof b, "%.4f", o);
        return std::string(b);
    };
    out += "order e_F: " + order(r.order_F) + "\n";
    out += "order e_Fx: " + order(r.order_Fx) + "\n";
    out += "order e_Fy: " + order(r.order_Fy) + "\n";
    for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
        std::snprintf(buf, sizeof buf, "eps %.6g: e_F %.4e  e_Fx %.4e  e_Fy %.4e  h %.6g\n", r.eps_list[i], r.e_F[i],
                      r.e_Fx[i], r.e_Fy[i], r.achieved_h[i]);
        out += buf;
    }
    return out;
}

namespace {
void write_text(const std::string& path, const std::string& text) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error(ErrorCode::Io, "cannot open " + path);
    std::fwrite(text.data(), 1, text.size(), fp);
    std::fclose(fp);
}
}  // namespace

void emit_report(const ConvergenceReport& report, const std::string& prefix) {
    write_text(prefix + ".csv", report_csv(report));
    write_text(prefix + "_summary.txt", report_summary(report));
}

double StripFidelity::max_exact() const { return std::max({dv, dwt, dk, dl}); }

StripFidelity strip_fidelity(const CauchyData& cd, const BjorlingData& data, double eps) {
    StripFidelity f;
    f.eps = eps;
    InitialStrip strip = sample_initial_strip(cd, data, eps);
    const DomainSpec& d = strip.spec;

    // v, w~, k, l on the strip need one grown row on each side for their stencils.
    GrowthResult g = grow(strip, std::min(eps, data.r));
    DiscreteQuantities q = extract(g.surface);
    const DomainSpec& gd = g.surface.spec;
    q.v.for_each([&](LatticeIndex c, const double& v) {
        double eta = gd.eta(c);
        if (eta < -1e-12 || eta > 0.5 * eps + 1e-12) return;
        double xi = gd.xi(c);
        f.dv = std::max(f.dv, std::abs(v - cd.v0(xi)));
        f.dwt = std::max(f.dwt, std::abs(q.w_tilde.at(c) - cd.w0(xi)));
    });
    q.k.for_each([&](LatticeIndex e, const double& k) {
        if (std::abs(gd.eta(e) - 0.25 * eps) > 1e-12) return;
        f.dk = std::max(f.dk, std::abs(k - cd.k0(gd.xi(e))));
    });
    q.l.for_each([&](LatticeIndex e, const double& l) {
        if (std::abs(gd.eta(e) - 0.25 * eps) > 1e-12) return;
        f.dl = std::max(f.dl, std::abs(l - cd.l0(gd.xi(e))));
    });

    strip.positions.for_each([&](LatticeIndex i, const Point3&) {
        f.e_f = std::max(f.e_f, (vertex(strip, i) - data.f(d.xi(i))).norm());
        for (int dir = 0; dir < 2; ++dir) {
            LatticeIndex j = dir == 0 ? LatticeIndex{i.m + 2, i.n} : LatticeIndex{i.m, i.n + 2};
            if (!strip.positions.has(j)) continue;
            LatticeIndex e = dir == 0 ? LatticeIndex{i.m + 1, i.n} : LatticeIndex{i.m, i.n + 1};
            CauchySample c = cd.at(d.xi(e));
            Point3 target = std::exp(c.u) * c.Psi.col(dir);
            double err = (strip.edge(j, i) / eps - target).norm();
            (dir == 0 ? f.e_fx : f.e_fy) = std::max(dir == 0 ? f.e_fx : f.e_fy, err);
        }
    });
    return f;
}

}  // namespace isogrow
