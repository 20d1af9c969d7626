#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcarpet/carpet.hpp"
#include "qcarpet/geometry.hpp"
#include "qcarpet/point.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// Grids, path families, densities
//
// Everything lives in the region's chart rectangle; for the log-polar kinds
// the chart is conformal with the quasihyperbolic metric, so lengths and
// areas there are the C* ones.
// ---------------------------------------------------------------------------

struct GridSpec {
    Region region;
    int nx = 1, ny = 1;  // cells along u and v
    double du = 1, dv = 1;

    GridSpec() = default;
    GridSpec(const Region& r, int nx_, int ny_);
    int cells() const { return nx * ny; }
    int cell_index(int ix, int iy) const { return iy * nx + ix; }
    double cell_area() const { return du * dv; }
    bool compatible(const GridSpec& o) const;
};

enum class FamilyKind { vertical, horizontal, radial, circular, custom };

/// A family of sampled polyline paths in chart coordinates. Product kinds
/// regenerate one path per grid column/row at solve time (midpoints).
struct PathFamily {
    Region region;
    FamilyKind kind = FamilyKind::custom;
    std::vector<std::vector<PointC>> paths;  // chart coordinates

    static PathFamily product(const Region& region, FamilyKind kind);
    static PathFamily custom(const Region& region, std::vector<std::vector<PointC>> paths);

    /// The concrete paths at a given grid resolution.
    std::vector<std::vector<PointC>> paths_at(const GridSpec& grid) const;
};

FamilyKind family_kind_from_name(const std::string& name);
std::string family_kind_name(FamilyKind kind);

struct Density {
    GridSpec grid;
    std::vector<double> values;  // per cell, >= 0

    double integral_sq() const;  // sum rho^2 * cell area
    double l2_deviation_from(double reference) const;
};

/// Per-cell crossing lengths of one path.
struct PathCrossings {
    std::vector<std::pair<int, double>> cells;
    double length = 0;
};
PathCrossings rasterize_path(const std::vector<PointC>& path, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Modulus
// ---------------------------------------------------------------------------

struct ModulusResult {
    double value = 0;
    Density density;  // extremal (admissible after the final projection)
    int iterations = 0;
    double gap = 0;
    double min_path_integral = 0;
    bool converged = false;
};

struct ModulusOptions {
    double gap_tol = 1e-4;
    double feasibility_tol = 1e-3;
    int max_iterations = 50000;
};

/// Discrete modulus of the family on an nx x ny grid: minimize sum rho^2 A
/// subject to unit line integrals, by dual coordinate ascent on the path
/// constraints with a final primal feasibility projection. Deterministic.
ModulusResult modulus(const PathFamily& family, int nx, int ny, ModulusOptions opts = {});

/// Minimum over family paths of the line integral of rho. Throws on grid
/// mismatch and on degenerate paths.
double admissibility_check(const Density& rho, const PathFamily& family);

/// L2 deviation ||rho - 1|| / ||1|| of the extremal density.
double extremal_density_deviation(const ModulusResult& result);

// ---------------------------------------------------------------------------
// Hole densities and the rigidity inequality machinery
// ---------------------------------------------------------------------------

/// Pairing of the hole set H = {K} u {holes} by the induced action of a
/// carpet map; index 0 is K, hole i sits at index i+1.
struct HolePairing {
    std::vector<int> perm;

    static HolePairing identity(std::size_t hole_count);
    int image_of(int idx) const { return perm[idx]; }
    int preimage_of(int idx) const;
    bool is_bijection() const;
};

/// A density that is piecewise constant on the holes (exact rectangles), 0
/// on the carpet. Integrals against it are exact algebra over hole areas.
struct HoleDensity {
    struct Piece {
        double x0, x1, y0, y1;
        double value;
    };
    std::vector<Piece> pieces;
    int case_id = 1;

    double integral_sq() const;
    double value_at(double u, double v) const;
    /// Exact line integral along a chart-axis segment at fixed cross
    /// coordinate; axis 0 integrates in u, axis 1 in v.
    double line_integral(int axis, double fixed_coord, double from, double to) const;
    Density rasterize(const GridSpec& grid) const;
};

/// Case 1 (w > h): rho = l(Q_p)/h on K, h/l(Q_q) on Q_q, l(F(Q))/l(Q)
/// elsewhere, with l the side length along the vertical family direction.
HoleDensity hole_density_case1(const Carpet& S, const HolePairing& pairing);
/// Case 2 (w < h): the same table with the roles of w and h exchanged; the
/// returned density is meant for the horizontal family scaled by 1/a.
HoleDensity hole_density_case2(const Carpet& S, const HolePairing& pairing);

struct RigidityBoundReport {
    int case_id = 1;
    bool admissible = false;
    double min_integral = 0;       // of the appropriately scaled density
    double max_linear_gap = 0;     // worst uncovered fraction along a path
    double integral_rho_sq = 0;
    double area_defect = 0;        // carpet area (the measure-zero shortfall)
    bool lower_bound_raw_ok = false;   // area <= integral rho^2
    bool lower_bound_ok = false;       // area <= integral rho^2 + defect
    bool implied_ok = false;           // min(w,h) <= l(F(K))
    double k_side = 0;                 // min(w,h)
    double image_side = 0;             // l(F(K))
};

/// Theorem 1.5 machinery on a rectangle-ring carpet (w != h; the square
/// case belongs to the square-carpet theorem and is rejected).
RigidityBoundReport rigidity_bound_check(const Carpet& S, const HolePairing& pairing, int grid_n);

/// Theorem 1.7 machinery on a C*-square carpet in log coordinates.
RigidityBoundReport cstar_rigidity_bound_check(const Carpet& S, const HolePairing& pairing,
                                               int grid_n);

// ---------------------------------------------------------------------------
// Log-coordinate transform of C* objects
// ---------------------------------------------------------------------------

/// z -> (log |z|, arg z); throws "out of domain" at 0.
PointC cstar_log_transform(PointC z);
/// Polyline transform with angle unwrapping along the path.
std::vector<PointC> cstar_log_transform(const std::vector<PointC>& path);
/// The finite cylinder {1 <= |z| <= r} as a log-coordinate region.
Region cstar_log_transform_region(double r);
/// Curve transform (vertex-wise, unwrapped).
ClosedCurve cstar_log_transform(const ClosedCurve& curve);
/// C*-length of a radial side: log(b/a).
double cstar_radial_length(double a, double b);

} // namespace qcarpet
