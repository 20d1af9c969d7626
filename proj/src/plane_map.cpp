#include "qcarpet/plane_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/util.hpp"

namespace qcarpet {

namespace {
bool chart_is_wrapped(const Region& r) { return r.chart().periodic_v; }
}

PlaneMap::PlaneMap(Region region, int nu, int nv, const std::function<PointC(PointC)>& fn)
    : region_(region), nu_(nu), nv_(nv), wrap_v_(chart_is_wrapped(region)) {
    if (nu_ < 1 || nv_ < 1) throw std::invalid_argument("plane map: bad lattice");
    const ChartRect c = region_.chart();
    du_ = c.du() / nu_;
    dv_ = c.dv() / nv_;
    values_.resize(static_cast<std::size_t>(nu_ + 1) * nv_nodes());
    parallel_for(values_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) {
            const int iu = static_cast<int>(n) / nv_nodes();
            const int iv = static_cast<int>(n) % nv_nodes();
            values_[n] = fn(node_point(iu, iv));
        }
    });
    build_bins();
}

PlaneMap::PlaneMap(Region region, int nu, int nv, std::vector<PointC> values)
    : region_(region), nu_(nu), nv_(nv), wrap_v_(chart_is_wrapped(region)), values_(std::move(values)) {
    if (nu_ < 1 || nv_ < 1) throw std::invalid_argument("plane map: bad lattice");
    const ChartRect c = region_.chart();
    du_ = c.du() / nu_;
    dv_ = c.dv() / nv_;
    if (values_.size() != static_cast<std::size_t>(nu_ + 1) * nv_nodes())
        throw std::invalid_argument("plane map: value count does not match lattice");
    for (const auto& p : values_)
        if (!p.finite()) throw std::invalid_argument("plane map: non-finite value");
    build_bins();
}

void PlaneMap::build_bins() {
    double x0 = values_[0].x, x1 = x0, y0 = values_[0].y, y1 = y0;
    for (const auto& p : values_) {
        x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    }
    const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(values_.size()) / 4.0)));
    bins_.g = g;
    bins_.x0 = x0;
    bins_.y0 = y0;
    bins_.cw = std::max((x1 - x0) / g, 1e-300);
    bins_.ch = std::max((y1 - y0) / g, 1e-300);
    bins_.cells.assign(static_cast<std::size_t>(g) * g, {});
    for (std::size_t n = 0; n < values_.size(); ++n) {
        const int bx = std::clamp(static_cast<int>((values_[n].x - x0) / bins_.cw), 0, g - 1);
        const int by = std::clamp(static_cast<int>((values_[n].y - y0) / bins_.ch), 0, g - 1);
        bins_.cells[static_cast<std::size_t>(bx) * g + by].push_back(static_cast<int>(n));
    }
}

int PlaneMap::seed_node(PointC w) const {
    const int g = bins_.g;
    const int bx = std::clamp(static_cast<int>((w.x - bins_.x0) / bins_.cw), 0, g - 1);
    const int by = std::clamp(static_cast<int>((w.y - bins_.y0) / bins_.ch), 0, g - 1);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < g; ++ring) {
        for (int ax = std::max(0, bx - ring); ax <= std::min(g - 1, bx + ring); ++ax) {
            for (int ay = std::max(0, by - ring); ay <= std::min(g - 1, by + ring); ++ay) {
                if (std::max(std::abs(ax - bx), std::abs(ay - by)) != ring) continue;
                for (int n : bins_.cells[static_cast<std::size_t>(ax) * g + ay]) {
                    const double d = dist2(values_[n], w);
                    if (d < best_d) {
                        best_d = d;
                        best = n;
                    }
                }
            }
        }
        // one extra ring after the first hit covers boundary effects
        if (best >= 0 && ring >= 1) break;
    }
    if (best < 0) best = 0;
    return best;
}

PlaneMap PlaneMap::identity(Region region, int nu, int nv) {
    return PlaneMap(region, nu, nv, [](PointC p) { return p; });
}

int PlaneMap::index(int iu, int iv) const {
    if (wrap_v_) {
        iv %= nv_;
        if (iv < 0) iv += nv_;
    }
    return iu * nv_nodes() + iv;
}

PointC PlaneMap::node_point(int iu, int iv) const {
    const ChartRect c = region_.chart();
    return region_.chart_to_plane(c.u0 + iu * du_, c.v0 + iv * dv_);
}

void PlaneMap::chart_of_node(int iu, int iv, double& u, double& v) const {
    const ChartRect c = region_.chart();
    u = c.u0 + iu * du_;
    v = c.v0 + iv * dv_;
}

PointC PlaneMap::eval_chart(double u, double v) const {
    const ChartRect c = region_.chart();
    double fu = (u - c.u0) / du_;
    double fv = (v - c.v0) / dv_;
    const double slack = 1.0;  // one-cell tolerance outside the chart rect
    if (fu < -slack || fu > nu_ + slack) throw std::domain_error("out of domain");
    if (wrap_v_) {
        fv = std::fmod(fv, static_cast<double>(nv_));
        if (fv < 0) fv += nv_;
    } else if (fv < -slack || fv > nv_ + slack) {
        throw std::domain_error("out of domain");
    }
    fu = std::clamp(fu, 0.0, static_cast<double>(nu_));
    if (!wrap_v_) fv = std::clamp(fv, 0.0, static_cast<double>(nv_));
    int iu = std::min(static_cast<int>(fu), nu_ - 1);
    int iv = std::min(static_cast<int>(fv), wrap_v_ ? nv_ - 1 : nv_ - 1);
    const double tu = fu - iu;
    const double tv = fv - iv;
    const PointC f00 = values_[index(iu, iv)];
    const PointC f10 = values_[index(iu + 1, iv)];
    const PointC f01 = values_[index(iu, iv + 1)];
    const PointC f11 = values_[index(iu + 1, iv + 1)];
    return f00 * ((1 - tu) * (1 - tv)) + f10 * (tu * (1 - tv)) + f01 * ((1 - tu) * tv) +
           f11 * (tu * tv);
}

PointC PlaneMap::eval(PointC p) const {
    if (region_.kind == RegionKind::disk) {
        // radial cap below the chart cutoff, pinned at the origin
        const double rr = p.norm();
        if (rr < region_.r) {
            if (rr <= 0) return {0, 0};
            const double theta = std::atan2(p.y, p.x);
            const PointC ring = eval_chart(region_.chart().u0, wrap_angle(theta));
            return ring * (rr / region_.r);
        }
    }
    double u, v;
    region_.plane_to_chart(p, u, v);
    return eval_chart(u, v);
}

double PlaneMap::folded_cell_fraction() const {
    std::size_t folded = 0, total = 0;
    for (int iu = 0; iu < nu_; ++iu) {
        for (int iv = 0; iv < nv_; ++iv) {
            const PointC a = values_[index(iu, iv)];
            const PointC b = values_[index(iu + 1, iv)];
            const PointC c = values_[index(iu, iv + 1)];
            if (cross(b - a, c - a) < 0) ++folded;
            ++total;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(folded) / static_cast<double>(total);
}

double PlaneMap::dilatation_estimate() const {
    const int iv_lo = wrap_v_ ? 0 : 1;
    const int iv_hi = wrap_v_ ? nv_ : nv_ - 1;
    double worst = 1.0;
    bool any = false;
    for (int iu = 1; iu < nu_; ++iu) {
        for (int iv = iv_lo; iv < iv_hi; ++iv) {
            const PointC f0 = values_[index(iu, iv)];
            double mx = 0.0, mn = std::numeric_limits<double>::infinity();
            for (int du8 = -1; du8 <= 1; ++du8) {
                for (int dv8 = -1; dv8 <= 1; ++dv8) {
                    if (du8 == 0 && dv8 == 0) continue;
                    const PointC f1 = values_[index(iu + du8, iv + dv8)];
                    const double step = std::hypot(du8 * du_, dv8 * dv_);
                    const double ratio = dist(f0, f1) / step;
                    mx = std::max(mx, ratio);
                    mn = std::min(mn, ratio);
                }
            }
            if (!(mn > 0)) throw std::runtime_error("collapsed node");
            worst = std::max(worst, mx / mn);
            any = true;
        }
    }
    if (!any) throw std::runtime_error("plane map: no interior nodes");
    return worst;
}

// ---------------------------------------------------------------------------
// Inversion
// ---------------------------------------------------------------------------

namespace {

/// Fixed-point solve of the bilinear cell system with a frozen Jacobian.
bool cell_solve(const PointC& f00, const PointC& f10, const PointC& f01, const PointC& f11,
                const PointC& w, double tol_abs, int max_iter, double& tu, double& tv) {
    const PointC eu = (f10 - f00 + f11 - f01) * 0.5;
    const PointC ev = (f01 - f00 + f11 - f10) * 0.5;
    const double det = cross(eu, ev);
    if (std::abs(det) < 1e-300) return false;
    tu = 0.5;
    tv = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        const PointC f = f00 * ((1 - tu) * (1 - tv)) + f10 * (tu * (1 - tv)) +
                         f01 * ((1 - tu) * tv) + f11 * (tu * tv);
        const PointC rsd = w - f;
        if (rsd.norm() <= tol_abs) return true;
        tu += (rsd.x * ev.y - rsd.y * ev.x) / det;
        tv += (eu.x * rsd.y - eu.y * rsd.x) / det;
        if (tu < -2 || tu > 3 || tv < -2 || tv > 3) return false;
    }
    return false;
}

} // namespace

std::optional<PointC> PlaneMap::solve_preimage(PointC w, int max_iter, double tol) const {
    const int seed = seed_node(w);
    int best_iu = seed / nv_nodes();
    int best_iv = seed % nv_nodes();
    double cell_scale = 0.0;
    {
        const int cu = std::min(best_iu, nu_ - 1);
        const int cv = wrap_v_ ? best_iv : std::min(best_iv, nv_ - 1);
        cell_scale = dist(values_[index(cu, cv)], values_[index(cu + 1, cv + 1)]);
        if (!(cell_scale > 0)) cell_scale = 1.0;
    }
    const double tol_abs = tol * cell_scale;

    // walk cells starting from the seed corner
    int iu = std::min(best_iu, nu_ - 1);
    int iv = wrap_v_ ? best_iv : std::min(best_iv, nv_ - 1);
    for (int step = 0; step < 4 * (nu_ + nv_); ++step) {
        double tu, tv;
        const bool ok = cell_solve(values_[index(iu, iv)], values_[index(iu + 1, iv)],
                                   values_[index(iu, iv + 1)], values_[index(iu + 1, iv + 1)], w,
                                   tol_abs, max_iter, tu, tv);
        if (ok && tu > -1e-9 && tu < 1 + 1e-9 && tv > -1e-9 && tv < 1 + 1e-9) {
            const ChartRect c = region_.chart();
            const double u = c.u0 + (iu + std::clamp(tu, 0.0, 1.0)) * du_;
            double v = c.v0 + (iv + std::clamp(tv, 0.0, 1.0)) * dv_;
            return region_.chart_to_plane(u, v);
        }
        // move toward the solve's suggestion; fall back to a ring search
        int niu = iu, niv = iv;
        if (ok) {
            if (tu < 0) niu = iu - 1;
            else if (tu > 1) niu = iu + 1;
            if (tv < 0) niv = iv - 1;
            else if (tv > 1) niv = iv + 1;
        } else {
            break;
        }
        if (!wrap_v_) niv = std::clamp(niv, 0, nv_ - 1);
        else { niv %= nv_; if (niv < 0) niv += nv_; }
        niu = std::clamp(niu, 0, nu_ - 1);
        if (niu == iu && niv == iv) break;
        iu = niu;
        iv = niv;
    }

    // exhaustive fallback over a neighborhood of the seed
    for (int ring = 0; ring <= std::max(nu_, nv_); ++ring) {
        for (int au = std::max(0, best_iu - ring); au <= std::min(nu_ - 1, best_iu + ring); ++au) {
            for (int dv8 = -ring; dv8 <= ring; ++dv8) {
                if (std::abs(au - best_iu) != ring && std::abs(dv8) != ring) continue;
                int av = best_iv + dv8;
                if (wrap_v_) { av %= nv_; if (av < 0) av += nv_; }
                else if (av < 0 || av > nv_ - 1) continue;
                double tu, tv;
                const bool ok = cell_solve(values_[index(au, av)], values_[index(au + 1, av)],
                                           values_[index(au, av + 1)], values_[index(au + 1, av + 1)],
                                           w, tol_abs, max_iter, tu, tv);
                if (ok && tu > -1e-9 && tu < 1 + 1e-9 && tv > -1e-9 && tv < 1 + 1e-9) {
                    const ChartRect c = region_.chart();
                    const double u = c.u0 + (au + std::clamp(tu, 0.0, 1.0)) * du_;
                    double v = c.v0 + (av + std::clamp(tv, 0.0, 1.0)) * dv_;
                    return region_.chart_to_plane(u, v);
                }
            }
        }
        if (ring > 8 && ring > (nu_ + nv_) / 8) break;  // give up beyond a broad search
    }
    return std::nullopt;
}

PlaneMap PlaneMap::invert() const {
    std::vector<PointC> inv(values_.size());
    std::vector<char> okflags(values_.size(), 0);
    parallel_for(values_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) {
            const int iu = static_cast<int>(n) / nv_nodes();
            const int iv = static_cast<int>(n) % nv_nodes();
            const auto z = solve_preimage(node_point(iu, iv));
            if (z) {
                inv[n] = *z;
                okflags[n] = 1;
            }
        }
    });
    for (std::size_t n = 0; n < okflags.size(); ++n)
        if (!okflags[n]) throw std::domain_error("out of domain: node has no preimage");
    return PlaneMap(region_, nu_, nv_, std::move(inv));
}

PlaneMap compose(const PlaneMap& f, const PlaneMap& g) {
    std::vector<PointC> vals(g.values().size());
    for (std::size_t n = 0; n < vals.size(); ++n) vals[n] = f.eval(g.values()[n]);
    return PlaneMap(g.domain(), g.nu(), g.nv(), std::move(vals));
}

double iteration_residual(const PlaneFn& f, int n, const std::vector<PointC>& probes) {
    double worst = 0.0;
    for (const PointC& p : probes) {
        PointC z = p;
        for (int i = 0; i < n; ++i) z = f(z);
        worst = std::max(worst, dist(z, p));
    }
    return worst;
}

std::vector<PointC> region_probes(const Region& region, std::size_t count) {
    const ChartRect c = region.chart();
    std::vector<PointC> out;
    out.reserve(count);
    std::size_t i = 0;
    while (out.size() < count && i < 64 * count + 1024) {
        const PointC q = kronecker2(i++);
        const double margin = 0.02;
        const double u = c.u0 + (margin + (1 - 2 * margin) * q.x) * c.du();
        const double v = c.v0 + (margin + (1 - 2 * margin) * q.y) * c.dv();
        const PointC p = region.chart_to_plane(u, v);
        if (region.contains(p)) out.push_back(p);
    }
    return out;
}

PeriodicProbeResult is_periodic(const PlaneMap& f, int k, double tol) {
    if (k < 1) throw std::invalid_argument("is_periodic: k must be >= 1");
    const auto probes = region_probes(f.domain(), 2048);
    PeriodicProbeResult out;
    out.residual = iteration_residual([&](PointC p) { return f.eval(p); }, k, probes);
    out.periodic = out.residual <= tol;
    return out;
}

} // namespace qcarpet
