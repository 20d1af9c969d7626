#pragma once

#include <optional>
#include <vector>

#include "qcarpet/geometry.hpp"

namespace qcarpet {

/// An axis-aligned open square hole, (center, side) in region coordinates
/// (log coordinates for the C* kinds).
struct Hole {
    double cx = 0, cy = 0, side = 0;
    double x0() const { return cx - side / 2; }
    double x1() const { return cx + side / 2; }
    double y0() const { return cy - side / 2; }
    double y1() const { return cy + side / 2; }
    bool contains(PointC p) const {
        return p.x > x0() && p.x < x1() && p.y > y0() && p.y < y1();
    }
};

// ---------------------------------------------------------------------------
// Carpet
//
// A finite-depth carpet: a base region minus a finite list of open square
// holes, plus the distinguished rectangle K for the ring kinds. C* carpets
// are stored in (log t, theta) coordinates throughout.
// ---------------------------------------------------------------------------

struct Carpet {
    Region region;
    std::vector<Hole> holes;  // ordered lexicographically by (cy, cx)
    int depth = 0;

    bool has_k() const { return region.has_k(); }

    /// Validation of the carpet conditions at finite depth: hole closures
    /// pairwise disjoint with positive gaps, inside the region interior,
    /// disjoint from K's closure.
    void validate() const;

    /// Smallest gap between distinct hole closures (and K / the boundary).
    double min_gap() const;

    double hole_area() const;
    double total_hole_area() const;  // holes plus K for ring kinds
};

/// Standard 1/3 carpet of the unit square. Hole count (8^depth - 1) / 7.
/// Throws "resolution" above depth 6.
Carpet sierpinski(int depth);

/// Square carpet in the rectangle ring [0,a]x[0,1] minus K=(s,s+w)x(t,t+h).
/// Depth-d rule: single-scale dyadic tiling by cells of side 2^-d; every
/// whole cell inside R and disjoint from the closure of K holds a centered
/// square shrunk by the gap fraction 0.2 * 4^(1-d). Cells meeting K are
/// dropped whole, never clipped.
Carpet ring_carpet(double a, double s, double w, double t, double h, int depth);

/// C*-square carpet in A \ K, stored in log coordinates: region
/// [0, log r] x [0, 2pi), K sides (log(b/a), beta - alpha). The rule tiles
/// theta with 8 * 2^depth cells (so holes never wrap the seam).
Carpet cstar_carpet(double r, double ka, double kb, double alpha, double beta, int depth);

/// Peripheral circles as closed curves: outer boundary first
/// (counterclockwise), then hole boundaries (clockwise), then K for ring
/// kinds; for C* carpets the two boundary circles come first and curves are
/// emitted in plane coordinates.
std::vector<ClosedCurve> peripheral_circles(const Carpet& S, std::size_t per_edge = 16);

/// Region area minus hole areas; the finite-depth measure defect reported
/// alongside every rigidity and modulus run.
double carpet_area(const Carpet& S);

} // namespace qcarpet
