#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcarpet/point.hpp"

namespace qcarpet {

enum class Orientation { clockwise, counterclockwise };

// ---------------------------------------------------------------------------
// ClosedCurve
// ---------------------------------------------------------------------------

/// A simple closed polyline. The first vertex is implicitly joined to the
/// last; the stored orientation must match the sign of the shoelace area.
struct ClosedCurve {
    std::vector<PointC> vertices;
    Orientation orientation = Orientation::counterclockwise;

    ClosedCurve() = default;
    /// Builds from vertices and derives the orientation. Throws
    /// "degenerate curve" on zero signed area or repeated vertices.
    explicit ClosedCurve(std::vector<PointC> vs);

    std::size_t size() const { return vertices.size(); }
    double signed_area() const;

    /// Checks that no two non-adjacent edges intersect. O(n^2).
    bool is_simple(double tol = 1e-12) const;

    ClosedCurve reversed() const;

    static ClosedCurve circle(std::size_t n, double radius = 1.0, PointC center = {0, 0},
                              bool ccw = true);
    static ClosedCurve axis_square(PointC center, double side, std::size_t per_edge = 2,
                                   bool ccw = true);
    /// Axis-aligned rectangle [x0,x0+w] x [y0,y0+h], sampled per_edge points per edge.
    static ClosedCurve axis_rect(double x0, double y0, double w, double h,
                                 std::size_t per_edge = 2, bool ccw = true);
};

/// A sub-polyline of a host curve, from vertex start to vertex end in the
/// host's cyclic vertex order (forward = increasing index).
struct Arc {
    const ClosedCurve* curve = nullptr;
    std::size_t start = 0;
    std::size_t end = 0;
    bool forward = true;

    std::vector<PointC> points() const;
};

// ---------------------------------------------------------------------------
// Region
// ---------------------------------------------------------------------------

enum class RegionKind {
    rect,          // [0,a] x [0,1]
    rect_ring,     // [0,a] x [0,1] minus K = (s,s+w) x (t,t+h)
    log_cylinder,  // [0, log r] x [0, 2pi), periodic in the second coordinate
    disk,          // closed unit disk, charted as (log radius, angle)
    annulus,       // {r <= |z| <= 1}, charted as (log radius, angle)
    window         // [cx-half, cx+half] x [cy-half, cy+half]
};

struct ChartRect {
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
    bool periodic_v = false;
    double du() const { return u1 - u0; }
    double dv() const { return v1 - v0; }
};

/// A planar base region together with a rectangular chart. Chart maps are
/// conformal for the log-polar kinds so quasihyperbolic lengths and areas
/// are the Euclidean ones in chart coordinates.
struct Region {
    RegionKind kind = RegionKind::rect;
    double a = 1.0;                    // rect / rect_ring width
    double ks = 0, kw = 0, kt = 0, kh = 0;  // rect_ring hole K = (s,s+w) x (t,t+h)
    double log_r = 1.0;                // log_cylinder height (= log of outer radius)
    double r = 0.5;                    // annulus inner radius; disk inner chart cutoff
    double half = 2.0;                 // window half extent
    PointC center{0, 0};               // window center

    static Region rect(double a);
    static Region rect_ring(double a, double s, double w, double t, double h);
    static Region log_cylinder(double log_r);
    static Region disk(double inner_cutoff = 1.0 / 64.0);
    static Region annulus(double r);
    static Region window(double half = 2.0, PointC center = {0, 0});

    ChartRect chart() const;
    PointC chart_to_plane(double u, double v) const;
    /// Inverse chart; throws "out of domain" for points it cannot represent.
    void plane_to_chart(PointC p, double& u, double& v) const;

    bool contains(PointC p, double tol = 1e-9) const;
    /// Chart-rectangle area (= quasihyperbolic area for the log kinds); the
    /// K hole of ring kinds is not subtracted here.
    double area() const;
    bool has_k() const { return kw > 0 && kh > 0; }
    std::string kind_name() const;
};

// ---------------------------------------------------------------------------
// Metric operations
// ---------------------------------------------------------------------------

/// Max pairwise Euclidean distance. Throws "empty set" on an empty span.
double diameter(std::span<const PointC> points);

/// Lower estimate of the quasicircle constant at the curve's sample
/// resolution: max over vertex pairs (z,w) of min(diam a, diam b)/|z-w|,
/// where a and b are the two complementary sub-polylines (endpoints
/// included). Pairs are stride-subsampled above 4096 vertices.
double quasicircle_constant(const ClosedCurve& curve);

/// Orientation from the shoelace-sum sign. Throws "degenerate curve" on
/// zero signed area.
Orientation signed_area_orientation(const ClosedCurve& curve);

} // namespace qcarpet
