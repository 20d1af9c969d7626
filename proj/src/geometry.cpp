#include "qcarpet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcarpet {

// ---------------------------------------------------------------------------
// ClosedCurve
// ---------------------------------------------------------------------------

ClosedCurve::ClosedCurve(std::vector<PointC> vs) : vertices(std::move(vs)) {
    if (vertices.size() < 3) throw std::invalid_argument("degenerate curve: fewer than 3 vertices");
    for (const auto& p : vertices)
        if (!p.finite()) throw std::invalid_argument("degenerate curve: non-finite vertex");
    orientation = signed_area_orientation(*this);
}

double ClosedCurve::signed_area() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PointC& p = vertices[i];
        const PointC& q = vertices[(i + 1) % n];
        s += cross(p, q);
    }
    return 0.5 * s;
}

namespace {

bool segments_properly_intersect(PointC a, PointC b, PointC c, PointC d, double tol) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
           ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
}

} // namespace

bool ClosedCurve::is_simple(double tol) const {
    const std::size_t n = vertices.size();
    const double scale = diameter(vertices);
    const double eps = tol * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (shared vertex)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                            vertices[(j + 1) % n], eps))
                return false;
        }
    }
    return true;
}

ClosedCurve ClosedCurve::reversed() const {
    ClosedCurve c;
    c.vertices.assign(vertices.rbegin(), vertices.rend());
    c.orientation = (orientation == Orientation::counterclockwise) ? Orientation::clockwise
                                                                   : Orientation::counterclockwise;
    return c;
}

ClosedCurve ClosedCurve::circle(std::size_t n, double radius, PointC center, bool ccw) {
    std::vector<PointC> vs;
    vs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = kTau * static_cast<double>(i) / static_cast<double>(n);
        const double ang = ccw ? t : -t;
        vs.push_back(center + circle_point(ang, radius));
    }
    return ClosedCurve(std::move(vs));
}

ClosedCurve ClosedCurve::axis_rect(double x0, double y0, double w, double h,
                                   std::size_t per_edge, bool ccw) {
    std::vector<PointC> vs;
    const std::size_t m = std::max<std::size_t>(per_edge, 2);
    auto edge = [&](PointC from, PointC to) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(m - 1);
            vs.push_back(from + (to - from) * t);
        }
    };
    const PointC c0{x0, y0}, c1{x0 + w, y0}, c2{x0 + w, y0 + h}, c3{x0, y0 + h};
    edge(c0, c1);
    edge(c1, c2);
    edge(c2, c3);
    edge(c3, c0);
    auto curve = ClosedCurve(std::move(vs));
    if (!ccw) curve = curve.reversed();
    return curve;
}

ClosedCurve ClosedCurve::axis_square(PointC center, double side, std::size_t per_edge, bool ccw) {
    return axis_rect(center.x - side / 2, center.y - side / 2, side, side, per_edge, ccw);
}

std::vector<PointC> Arc::points() const {
    std::vector<PointC> out;
    if (!curve) return out;
    const std::size_t n = curve->vertices.size();
    std::size_t i = start;
    out.push_back(curve->vertices[i]);
    while (i != end) {
        i = forward ? (i + 1) % n : (i + n - 1) % n;
        out.push_back(curve->vertices[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Region
// ---------------------------------------------------------------------------

Region Region::rect(double a) {
    if (!(a > 0)) throw std::invalid_argument("region: a must be positive");
    Region g;
    g.kind = RegionKind::rect;
    g.a = a;
    return g;
}

Region Region::rect_ring(double a, double s, double w, double t, double h) {
    if (!(a > 0 && w > 0 && h > 0)) throw std::invalid_argument("region: sides must be positive");
    if (!(s > 0 && t > 0 && s + w < a && t + h < 1))
        throw std::invalid_argument("region: K closure must lie inside the rectangle interior");
    Region g;
    g.kind = RegionKind::rect_ring;
    g.a = a;
    g.ks = s; g.kw = w; g.kt = t; g.kh = h;
    return g;
}

Region Region::log_cylinder(double log_r) {
    if (!(log_r > 0)) throw std::invalid_argument("region: log r must be positive");
    Region g;
    g.kind = RegionKind::log_cylinder;
    g.log_r = log_r;
    return g;
}

Region Region::disk(double inner_cutoff) {
    if (!(inner_cutoff > 0 && inner_cutoff < 1)) throw std::invalid_argument("region: bad disk cutoff");
    Region g;
    g.kind = RegionKind::disk;
    g.r = inner_cutoff;
    return g;
}

Region Region::annulus(double r) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("region: annulus radius must lie in (0,1)");
    Region g;
    g.kind = RegionKind::annulus;
    g.r = r;
    return g;
}

Region Region::window(double half, PointC center) {
    if (!(half > 0)) throw std::invalid_argument("region: window half extent must be positive");
    Region g;
    g.kind = RegionKind::window;
    g.half = half;
    g.center = center;
    return g;
}

ChartRect Region::chart() const {
    switch (kind) {
        case RegionKind::rect:
        case RegionKind::rect_ring:
            return {0, a, 0, 1, false};
        case RegionKind::log_cylinder:
            return {0, log_r, 0, kTau, true};
        case RegionKind::disk:
            return {std::log(r), 0, 0, kTau, true};
        case RegionKind::annulus:
            return {std::log(r), 0, 0, kTau, true};
        case RegionKind::window:
            return {center.x - half, center.x + half, center.y - half, center.y + half, false};
    }
    return {};
}

PointC Region::chart_to_plane(double u, double v) const {
    switch (kind) {
        case RegionKind::rect:
        case RegionKind::rect_ring:
        case RegionKind::window:
            return {u, v};
        case RegionKind::log_cylinder:
        case RegionKind::disk:
        case RegionKind::annulus:
            return circle_point(v, std::exp(u));
    }
    return {u, v};
}

void Region::plane_to_chart(PointC p, double& u, double& v) const {
    switch (kind) {
        case RegionKind::rect:
        case RegionKind::rect_ring:
        case RegionKind::window:
            u = p.x;
            v = p.y;
            return;
        case RegionKind::log_cylinder:
        case RegionKind::disk:
        case RegionKind::annulus: {
            const double rr = p.norm();
            if (rr <= 0) throw std::domain_error("out of domain: log chart at the origin");
            u = std::log(rr);
            v = wrap_angle(std::atan2(p.y, p.x));
            return;
        }
    }
}

bool Region::contains(PointC p, double tol) const {
    switch (kind) {
        case RegionKind::rect:
            return p.x >= -tol && p.x <= a + tol && p.y >= -tol && p.y <= 1 + tol;
        case RegionKind::rect_ring: {
            const bool in_rect = p.x >= -tol && p.x <= a + tol && p.y >= -tol && p.y <= 1 + tol;
            const bool in_k = p.x > ks + tol && p.x < ks + kw - tol && p.y > kt + tol &&
                              p.y < kt + kh - tol;
            return in_rect && !in_k;
        }
        case RegionKind::log_cylinder: {
            const double rr = p.norm();
            return rr >= 1 - tol && rr <= std::exp(log_r) + tol;
        }
        case RegionKind::disk:
            return p.norm() <= 1 + tol;
        case RegionKind::annulus: {
            const double rr = p.norm();
            return rr >= r - tol && rr <= 1 + tol;
        }
        case RegionKind::window:
            return std::abs(p.x - center.x) <= half + tol && std::abs(p.y - center.y) <= half + tol;
    }
    return false;
}

double Region::area() const {
    const ChartRect c = chart();
    return c.du() * c.dv();
}

std::string Region::kind_name() const {
    switch (kind) {
        case RegionKind::rect: return "rect";
        case RegionKind::rect_ring: return "rect-ring";
        case RegionKind::log_cylinder: return "log-cylinder";
        case RegionKind::disk: return "disk";
        case RegionKind::annulus: return "annulus";
        case RegionKind::window: return "window";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Metric operations
// ---------------------------------------------------------------------------

double diameter(std::span<const PointC> points) {
    if (points.empty()) throw std::invalid_argument("empty set");
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, dist2(points[i], points[j]));
    return std::sqrt(best);
}

double quasicircle_constant(const ClosedCurve& curve) {
    if (curve.vertices.size() < 8)
        throw std::invalid_argument("degenerate curve: need at least 8 vertices");
    if (!curve.is_simple()) throw std::invalid_argument("degenerate curve: self-intersection");

    // stride subsampling above the 4096-vertex cap
    std::vector<PointC> pts;
    {
        const std::size_t cap = 4096;
        const std::size_t stride = (curve.vertices.size() + cap - 1) / cap;
        for (std::size_t i = 0; i < curve.vertices.size(); i += stride) pts.push_back(curve.vertices[i]);
    }
    const std::size_t n = pts.size();

    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
    const double eps = 1e-14 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        if (dist(pts[i], pts[(i + 1) % n]) < eps)
            throw std::invalid_argument("degenerate curve: repeated vertices");

    // diam[i*n+j] = diameter of the forward sub-polyline from vertex i to j
    std::vector<float> diam(n * n, 0.0f);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t len = 1; len < n; ++len) {
            const PointC& nw = pts[(i + len) % n];
            for (std::size_t k = 0; k < len; ++k) d = std::max(d, dist2(pts[(i + k) % n], nw));
            diam[i * n + (i + len) % n] = static_cast<float>(d);
        }
    }

    double best = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double chord = dist(pts[i], pts[j]);
            if (chord < eps) throw std::invalid_argument("degenerate curve: repeated vertices");
            const double da = std::sqrt(static_cast<double>(diam[i * n + j]));
            const double db = std::sqrt(static_cast<double>(diam[j * n + i]));
            best = std::max(best, std::min(da, db) / chord);
        }
    }
    return best;
}

Orientation signed_area_orientation(const ClosedCurve& curve) {
    const double area = curve.signed_area();
    double scale = 0.0;
    for (const auto& p : curve.vertices) scale = std::max(scale, p.norm());
    if (std::abs(area) <= 1e-14 * std::max(scale * scale, 1e-300))
        throw std::invalid_argument("degenerate curve: zero signed area");
    return area > 0 ? Orientation::counterclockwise : Orientation::clockwise;
}

} // namespace qcarpet
