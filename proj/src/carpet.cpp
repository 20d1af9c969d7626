#include "qcarpet/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcarpet {

namespace {

double rect_gap(double ax0, double ax1, double ay0, double ay1, double bx0, double bx1, double by0,
                double by1) {
    const double gx = std::max({ax0 - bx1, bx0 - ax1, 0.0});
    const double gy = std::max({ay0 - by1, by0 - ay1, 0.0});
    if (gx == 0.0 && gy == 0.0) return 0.0;
    return std::hypot(gx, gy);
}

void sort_holes(std::vector<Hole>& holes) {
    std::sort(holes.begin(), holes.end(), [](const Hole& a, const Hole& b) {
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.cx < b.cx;
    });
}

} // namespace

namespace {

// gap between two chart rectangles, cyclically in v when the chart wraps
double hole_gap(const ChartRect& c, double ax0, double ax1, double ay0, double ay1, double bx0,
                double bx1, double by0, double by1) {
    double g = rect_gap(ax0, ax1, ay0, ay1, bx0, bx1, by0, by1);
    if (c.periodic_v) {
        const double period = c.dv();
        g = std::min(g, rect_gap(ax0, ax1, ay0, ay1, bx0, bx1, by0 + period, by1 + period));
        g = std::min(g, rect_gap(ax0, ax1, ay0, ay1, bx0, bx1, by0 - period, by1 - period));
    }
    return g;
}

} // namespace

void Carpet::validate() const {
    const ChartRect c = region.chart();
    for (const auto& h : holes) {
        if (!(h.side > 0)) throw std::invalid_argument("carpet: non-positive hole side");
        const bool inside_u = h.x0() > c.u0 && h.x1() < c.u1;
        const bool inside_v = c.periodic_v || (h.y0() > c.v0 && h.y1() < c.v1);
        if (!inside_u || !inside_v)
            throw std::invalid_argument("carpet: hole closure not inside the region interior");
        if (has_k()) {
            const double g = hole_gap(c, h.x0(), h.x1(), h.y0(), h.y1(), region.ks,
                                      region.ks + region.kw, region.kt, region.kt + region.kh);
            if (!(g > 0)) throw std::invalid_argument("carpet: hole meets the closure of K");
        }
    }
    for (std::size_t i = 0; i < holes.size(); ++i) {
        for (std::size_t j = i + 1; j < holes.size(); ++j) {
            const auto& a = holes[i];
            const auto& b = holes[j];
            const double g =
                hole_gap(c, a.x0(), a.x1(), a.y0(), a.y1(), b.x0(), b.x1(), b.y0(), b.y1());
            if (!(g > 0)) throw std::invalid_argument("carpet: hole closures not disjoint");
        }
    }
}

double Carpet::min_gap() const {
    const ChartRect c = region.chart();
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < holes.size(); ++i) {
        const auto& a = holes[i];
        g = std::min({g, a.x0() - c.u0, c.u1 - a.x1()});
        if (!c.periodic_v) g = std::min({g, a.y0() - c.v0, c.v1 - a.y1()});
        if (has_k())
            g = std::min(g, hole_gap(c, a.x0(), a.x1(), a.y0(), a.y1(), region.ks,
                                     region.ks + region.kw, region.kt, region.kt + region.kh));
        for (std::size_t j = i + 1; j < holes.size(); ++j) {
            const auto& b = holes[j];
            g = std::min(g,
                         hole_gap(c, a.x0(), a.x1(), a.y0(), a.y1(), b.x0(), b.x1(), b.y0(), b.y1()));
        }
    }
    return g;
}

double Carpet::hole_area() const {
    double s = 0.0;
    for (const auto& h : holes) s += h.side * h.side;
    return s;
}

double Carpet::total_hole_area() const {
    return hole_area() + (has_k() ? region.kw * region.kh : 0.0);
}

Carpet sierpinski(int depth) {
    if (depth < 0 || depth > 6) throw std::invalid_argument("resolution: depth must lie in [0, 6]");
    Carpet S;
    S.region = Region::rect(1.0);
    S.depth = depth;
    // recursive middle-third removal
    struct Cell { double x, y, s; };
    std::vector<Cell> level{{0, 0, 1}};
    for (int d = 1; d <= depth; ++d) {
        std::vector<Cell> next;
        next.reserve(level.size() * 8);
        for (const auto& c : level) {
            const double t = c.s / 3;
            S.holes.push_back({c.x + 1.5 * t, c.y + 1.5 * t, t});
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (!(i == 1 && j == 1)) next.push_back({c.x + i * t, c.y + j * t, t});
        }
        level = std::move(next);
    }
    sort_holes(S.holes);
    return S;
}

Carpet ring_carpet(double a, double s, double w, double t, double h, int depth) {
    if (depth < 0 || depth > 6) throw std::invalid_argument("resolution: depth must lie in [0, 6]");
    Carpet S;
    S.region = Region::rect_ring(a, s, w, t, h);
    S.depth = depth;
    if (depth >= 1) {
        const double cell = std::pow(0.5, depth);
        const double gap = 0.2 * std::pow(0.25, depth - 1);
        const double side = (1.0 - gap) * cell;
        const int nx = static_cast<int>(std::floor(a / cell + 1e-12));
        const int ny = static_cast<int>(std::floor(1.0 / cell + 1e-12));
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                const double x0 = ix * cell, y0 = iy * cell;
                // drop whole cells that meet the closure of K
                if (!(x0 + cell <= s || x0 >= s + w || y0 + cell <= t || y0 >= t + h)) continue;
                S.holes.push_back({x0 + cell / 2, y0 + cell / 2, side});
            }
        }
        if (S.holes.size() > 100000) throw std::invalid_argument("resolution: too many holes");
    }
    sort_holes(S.holes);
    if (S.holes.size() <= 4096) S.validate();
    return S;
}

Carpet cstar_carpet(double r, double ka, double kb, double alpha, double beta, int depth) {
    if (depth < 0 || depth > 6) throw std::invalid_argument("resolution: depth must lie in [0, 6]");
    if (!(1 < ka && ka < kb && kb < r))
        throw std::invalid_argument("cstar carpet: need 1 < a < b < r");
    if (!(0 <= alpha && alpha < beta && beta - alpha < kTau))
        throw std::invalid_argument("cstar carpet: need 0 <= alpha < beta < alpha + 2pi");
    if (beta > kTau)
        throw std::invalid_argument("cstar carpet: K must not wrap the theta seam");
    const double L = std::log(r);
    Carpet S;
    S.region = Region::log_cylinder(L);
    S.depth = depth;
    // K in log coordinates: [log a, log b] x [alpha, beta]
    const double ks = std::log(ka), kwid = std::log(kb) - std::log(ka);
    S.region.ks = ks;
    S.region.kw = kwid;
    S.region.kt = alpha;
    S.region.kh = beta - alpha;
    if (depth >= 1) {
        const int ntheta = 8 << depth;  // exact wrap, divisible by small symmetries
        const double cell = kTau / ntheta;
        const double gap = 0.2 * std::pow(0.25, depth - 1);
        const double side = (1.0 - gap) * cell;
        const int nu = static_cast<int>(std::floor(L / cell + 1e-12));
        const double off = (L - nu * cell) / 2;  // center the strip in the radial direction
        for (int iv = 0; iv < ntheta; ++iv) {
            for (int iu = 0; iu < nu; ++iu) {
                const double u0 = off + iu * cell, v0 = iv * cell;
                if (!(u0 + cell <= ks || u0 >= ks + kwid || v0 + cell <= alpha || v0 >= beta))
                    continue;
                if (!(u0 > 0 && u0 + cell < L)) continue;  // keep closures inside
                S.holes.push_back({u0 + cell / 2, v0 + cell / 2, side});
            }
        }
        if (S.holes.size() > 100000) throw std::invalid_argument("resolution: too many holes");
    }
    sort_holes(S.holes);
    if (S.holes.size() <= 4096) S.validate();
    return S;
}

std::vector<ClosedCurve> peripheral_circles(const Carpet& S, std::size_t per_edge) {
    std::vector<ClosedCurve> out;
    switch (S.region.kind) {
        case RegionKind::rect:
            out.push_back(ClosedCurve::axis_rect(0, 0, S.region.a, 1, per_edge, true));
            break;
        case RegionKind::rect_ring:
            out.push_back(ClosedCurve::axis_rect(0, 0, S.region.a, 1, per_edge, true));
            break;
        case RegionKind::log_cylinder: {
            const double R = std::exp(S.region.log_r);
            const std::size_t n = std::max<std::size_t>(4 * per_edge, 16);
            out.push_back(ClosedCurve::circle(n, R, {0, 0}, true));   // outer
            out.push_back(ClosedCurve::circle(n, 1.0, {0, 0}, false));  // inner
            break;
        }
        default:
            throw std::invalid_argument("carpet: unsupported region kind");
    }
    auto emit_hole = [&](double x0, double y0, double w, double h) {
        if (S.region.kind == RegionKind::log_cylinder) {
            // map the log-rectangle boundary back to the plane
            std::vector<PointC> vs;
            const std::size_t m = std::max<std::size_t>(per_edge, 2);
            auto edge = [&](PointC from, PointC to) {
                for (std::size_t i = 0; i + 1 < m; ++i) {
                    const double tt = static_cast<double>(i) / static_cast<double>(m - 1);
                    const PointC q = from + (to - from) * tt;
                    vs.push_back(circle_point(q.y, std::exp(q.x)));
                }
            };
            edge({x0, y0}, {x0 + w, y0});
            edge({x0 + w, y0}, {x0 + w, y0 + h});
            edge({x0 + w, y0 + h}, {x0, y0 + h});
            edge({x0, y0 + h}, {x0, y0});
            ClosedCurve curve{std::move(vs)};
            if (curve.orientation != Orientation::clockwise) curve = curve.reversed();
            out.push_back(std::move(curve));
        } else {
            out.push_back(ClosedCurve::axis_rect(x0, y0, w, h, per_edge, false));
        }
    };
    for (const auto& h : S.holes) emit_hole(h.x0(), h.y0(), h.side, h.side);
    if (S.region.kind == RegionKind::rect_ring || S.region.kind == RegionKind::log_cylinder) {
        if (S.region.kw > 0)
            emit_hole(S.region.ks, S.region.kt, S.region.kw, S.region.kh);
    }
    return out;
}

double carpet_area(const Carpet& S) { return S.region.area() - S.total_hole_area(); }

} // namespace qcarpet
