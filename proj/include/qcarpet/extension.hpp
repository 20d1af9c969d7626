#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qcarpet/carpet.hpp"
#include "qcarpet/charts.hpp"
#include "qcarpet/circle_map.hpp"
#include "qcarpet/plane_map.hpp"

namespace qcarpet {

/// Reflection through the circle |z| = r: R_r(z) = r^2 / conj(z).
/// Throws "pole" at z = 0.
PointC reflect(PointC z, double r);

// ---------------------------------------------------------------------------
// Beurling-Ahlfors extension
//
// The classical integral-average extension of a lifted boundary map,
// conjugated to the unit disk through z = e^{i(x+iy)}. The lift integrals of
// a piecewise-linear boundary map are evaluated in closed form, so identity
// and rotation boundaries extend exactly. Values are kept in half-plane
// coordinates (u, v) = (argument lift, -log radius); interpolating there
// keeps the unit circle invariant between nodes as well.
// ---------------------------------------------------------------------------

class BaHalfPlaneMap {
public:
    /// Extends an orientation-preserving boundary map. ymax bounds the chart
    /// depth (-log of the innermost grid radius); below it the map continues
    /// by rigid radial scaling. Throws "orientation" on reversing input.
    BaHalfPlaneMap(const CircleMap& boundary, int nx, int ny, double ymax);

    const CircleMap& boundary() const { return boundary_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double ymax() const { return ymax_; }

    /// Exact closed-form extension value (quadrature-free).
    void exact_uv(double x, double y, double& u, double& v) const;

    /// Grid-interpolated extension in half-plane coordinates.
    void eval_uv(double x, double y, double& u, double& v) const;

    /// Disk evaluation of the grid map; z = 0 maps to 0.
    PointC eval_disk(PointC z) const;

    /// Functional inverse of the grid map on the disk.
    PointC inverse_disk(PointC w) const;

private:
    CircleMap boundary_;
    int nx_ = 0, ny_ = 0;
    double ymax_ = 0, dx_ = 0, dy_ = 0;
    std::vector<double> u_, v_;  // (ny+1) rows * nx columns, row-major

    double lift_integral(double x) const;  // exact antiderivative of the lift
    std::vector<double> cumint_;           // per-breakpoint integral table

    int idx(int iy, int ix) const { return iy * nx_ + ix; }
    double u_at(int iy, int ix) const;  // with the +-2pi wrap in x
    double v_at(int iy, int ix) const;
    bool cell_solve(int iy, int ix, double tu_u, double tv_v, double& x, double& y) const;
};

/// Spec-facing wrapper: materializes the extension on a log-polar disk grid.
/// Boundary row values reproduce the boundary map exactly at nodes.
PlaneMap ba_extend(const CircleMap& boundary, int ns = 96, int ntheta = 256,
                   double inner_cutoff = 1.0 / 64.0);

// ---------------------------------------------------------------------------
// Annulus decomposition and glue maps (the k-periodic extension machinery)
// ---------------------------------------------------------------------------

/// Decomposition of A_r into k annular-sector cells over the orbit
/// u_j = f^j(u_0). Angles live on the lift ladder u[0..k+1] with
/// u[j+1] = lift(u[j]); the signed cell extents all share one direction.
struct AnnulusDecomposition {
    CircleMap f;
    double r = 0.5;
    int k = 2;
    int dir = 1;              // +1 if the ladder ascends, -1 if it descends
    std::vector<double> u;    // size k+2, lift ladder

    double delta(int j) const { return u[j + 1] - u[j]; }
    SectorDiskChart chart(int j) const { return SectorDiskChart(r, u[j], delta(j)); }
    /// Index of the cell whose angular window contains theta.
    int cell_of_angle(double theta) const;
    /// Cell boundary polygon (outer arc sampled with arc_samples vertices).
    ClosedCurve cell_polygon(int j, std::size_t arc_samples = 64) const;
};

/// Deterministic default u_0: the sample angle whose orbit maximizes the
/// minimum pairwise chord distance.
double default_u0(const CircleMap& f, int k);

/// Builds the decomposition. Preconditions: f k-periodic (residual <= 1e-9),
/// orientation-preserving, k >= 2; the orbit of u0 must consist of k distinct
/// points in cyclic order, otherwise "degenerate orbit" is raised.
AnnulusDecomposition decompose_annulus(const CircleMap& f, double r, double u0, int k);

enum class CellPiece { seg_lo, arc_outer, seg_hi, arc_inner };

/// A point of the cell boundary C_j, tagged by piece and parameter in [0,1].
/// seg pieces run outer->inner; arc pieces run along the cell direction.
struct CellBoundaryPoint {
    int j = 0;
    CellPiece piece = CellPiece::arc_outer;
    double t = 0;
};

/// The boundary homeomorphisms h_j: C_j -> C_{j+1} assembled from f and the
/// constant-speed parameterizations p_j, q_j.
class GlueMaps {
public:
    explicit GlueMaps(AnnulusDecomposition dec);

    const AnnulusDecomposition& dec() const { return dec_; }
    CellBoundaryPoint apply(const CellBoundaryPoint& p) const;  // h_{p.j}
    PointC point_of(const CellBoundaryPoint& p) const;
    /// n points spread over the four pieces of C_j.
    std::vector<CellBoundaryPoint> boundary_samples(int j, std::size_t n) const;
    /// Max displacement of h_{k-1} ... h_1 h_0 against the identity on C_0.
    double composite_identity_residual(std::size_t samples = 512) const;
    /// Max mismatch of the two piece formulas at the four corners of C_j.
    double corner_continuity_residual(int j) const;

private:
    AnnulusDecomposition dec_;
};

GlueMaps build_glue_maps(const AnnulusDecomposition& dec, const CircleMap& f);

// ---------------------------------------------------------------------------
// Periodic annulus extension (cell-to-cell extension of the glue maps)
// ---------------------------------------------------------------------------

class AnnulusPeriodicMap {
public:
    /// k = 1: radial extension of f. k >= 2: per-cell disk extensions of
    /// h_0..h_{k-2} with the last cell mapped by the inverse composition.
    AnnulusPeriodicMap(const CircleMap& f, double r, int k, int grid);

    int k() const { return k_; }
    double r() const { return r_; }
    const AnnulusDecomposition& decomposition() const;

    PointC eval(PointC z) const;
    PlaneFn fn() const {
        return [this](PointC z) { return eval(z); };
    }

    /// sup over boundary samples of |F(e^{i t}) - e^{i f(t)}|.
    double boundary_agreement(std::size_t samples = 2048) const;
    /// Largest image spacing between adjacent boundary samples of the grids
    /// (the natural "one sample spacing" yardstick).
    double boundary_sample_spacing() const;
    /// Max 8-direction dilatation over an interior probe lattice per cell,
    /// one cell-chart step away from the gluing curves.
    std::vector<double> cell_dilatations(int probes = 24) const;

    PlaneMap to_plane_map(int ns, int ntheta) const;

private:
    double r_ = 0.5;
    int k_ = 1;
    int grid_ = 256;
    CircleMap f_;
    std::optional<AnnulusDecomposition> dec_;
    std::vector<std::shared_ptr<BaHalfPlaneMap>> cells_;  // B_j, j = 0..k-2

    PointC apply_cell(int j, PointC z) const;          // H_j, j <= k-2
    PointC apply_cell_inverse(int j, PointC z) const;  // H_j^{-1}
};

AnnulusPeriodicMap periodic_annulus_extension(const CircleMap& f, double r, int k, int grid = 256);

// ---------------------------------------------------------------------------
// Reflection tower and whole-plane extension
// ---------------------------------------------------------------------------

struct RingResidual {
    double rho = 0;
    double residual = 0;
};

struct TowerManifest {
    std::vector<RingResidual> rings;
    bool monotone = true;
};

/// Schwarz tower over an annulus self-map f0 of A_r with invariant boundary
/// circles: f_m = R_rho f_{m-1} R_rho on each new ring, rho = r^{2^{m-1}},
/// with a rigid radial cap below r^{2^M} pinned at the origin.
class ReflectionTower {
public:
    ReflectionTower(PlaneFn f0, double r, int depth);

    double r() const { return r_; }
    int depth() const { return depth_; }
    double inner_radius() const { return rho_.back(); }

    PointC eval(PointC z) const;  // f_infty on the closed unit disk
    PlaneFn fn() const {
        return [this](PointC z) { return eval(z); };
    }

    /// Per-ring k-fold iteration residuals (ring 0 = the base annulus).
    TowerManifest ring_residuals(int k, std::size_t probes_per_ring = 512) const;

private:
    PlaneFn f0_;
    double r_;
    int depth_;
    std::vector<double> rho_;  // rho_[m] = r^{2^m}, m = 0..depth

    PointC eval_level(PointC z, int m) const;
};

/// Default doubling depth: rings below `grid_spacing` are subpixel.
int default_tower_depth(double r, double grid_spacing);

/// Checks that f0 preserves the two boundary circles of A_r within tol, then
/// builds the tower. Throws "boundary not preserved" otherwise.
ReflectionTower reflection_tower_extend(const PlaneFn& f0, double r, int depth,
                                        double boundary_tol = 1e-3);

/// Whole-plane window extension: f_infty inside the closed disk, conjugation
/// by the unit reflection outside.
class PlaneWindowMap {
public:
    explicit PlaneWindowMap(PlaneFn disk_map) : inner_(std::move(disk_map)) {}
    PointC eval(PointC z) const;
    PlaneFn fn() const {
        return [this](PointC z) { return eval(z); };
    }
    PlaneMap to_plane_map(int n, double half = 2.0) const;

private:
    PlaneFn inner_;
};

PlaneWindowMap extend_to_plane(PlaneFn disk_map);

// ---------------------------------------------------------------------------
// Hole orbits and the carpet surgery
// ---------------------------------------------------------------------------

struct Orbit {
    int rep = 0;
    int period = 1;
    std::vector<int> members;  // rep, perm(rep), ..., in orbit order
};

struct OrbitDecomposition {
    std::vector<int> perm;      // image hole index per hole
    std::vector<int> inv_perm;
    std::vector<Orbit> orbits;  // one per representative, reps increasing

    const Orbit& orbit_of(int hole) const;
    int position_in_orbit(int hole) const;  // steps from the representative
};

/// Orbit decomposition from an explicit permutation; periods must divide k.
OrbitDecomposition hole_orbits(const Carpet& S, const std::vector<int>& perm, int k);

/// Orbit decomposition of a point map: each hole boundary is pushed through
/// f and matched to a hole by boundary distance; the threshold is half the
/// minimum gap between hole closures. Throws "orbit matching failed" on
/// ambiguity.
OrbitDecomposition hole_orbits(const Carpet& S, const PlaneFn& f, int k);

/// Boundary data of a carpet self-map: the outer boundary map and per-hole
/// boundary maps, conjugated to circle maps through the region/hole disk
/// charts, plus the induced hole permutation.
struct CarpetBoundaryData {
    int k = 1;
    CircleMap outer;
    std::vector<int> perm;
    std::vector<CircleMap> hole_maps;

    /// Max periodicity residual of the boundary data (outer map and every
    /// orbit composite), in circle-lift units.
    double periodicity_residual(const Carpet& S) const;
};

/// The hole-orbit surgery: starts from the non-periodic initial extension
/// (per-hole disk extensions blended into the outer extension) and replaces
/// the last map of each orbit by g_j applied after the inverse walk, making
/// the result k-periodic on the hole closures and the carpet samples.
class CarpetSurgeryMap {
public:
    CarpetSurgeryMap(const Carpet& S, const CarpetBoundaryData& data, int grid);

    const Carpet& carpet() const { return S_; }
    const OrbitDecomposition& orbits() const { return orbits_; }
    int k() const { return data_.k; }

    PointC eval(PointC z) const;                 // the periodic extension F
    PointC eval_initial(PointC z) const;         // the initial extension f~
    PointC boundary_value(int hole, PointC z) const;  // f on a hole boundary
    PointC outer_boundary_value(PointC z) const;

    /// Probes on the discrete carpet: peripheral samples plus hole closures.
    std::vector<PointC> carpet_probes(std::size_t per_hole = 64) const;
    double periodicity_residual(std::size_t per_hole = 64) const;
    /// Max |F - f| over peripheral boundary samples.
    double boundary_agreement(std::size_t per_circle = 256) const;
    /// Max |F^{m_j}(z) - g_j(z)| over representative hole closures.
    double orbit_return_residual(std::size_t per_hole = 64) const;

private:
    Carpet S_;
    CarpetBoundaryData data_;
    OrbitDecomposition orbits_;
    int grid_;

    std::vector<SquareDiskChart> hole_charts_;
    RectDiskChart outer_chart_;
    std::vector<std::shared_ptr<BaHalfPlaneMap>> hole_ext_;  // H_i in disk coords
    std::shared_ptr<BaHalfPlaneMap> outer_ext_;              // G in disk coords
    std::vector<PlaneFn> rep_g_;                             // g_j per orbit (disk coords)
    std::vector<std::shared_ptr<ReflectionTower>> rep_towers_;
    std::vector<std::shared_ptr<AnnulusPeriodicMap>> rep_annuli_;
    std::vector<double> collar_half_;                        // per-hole collar half extent

    int hole_containing(PointC z) const;  // closed containment, -1 if none
    PointC apply_hole_map(int i, PointC z) const;      // H_i
    PointC apply_hole_map_inv(int i, PointC z) const;  // H_i^{-1}
    PointC apply_g(int orbit_index, PointC z) const;   // g_j on the rep hole
};

CarpetSurgeryMap carpet_periodic_extension(const Carpet& S, const CarpetBoundaryData& data,
                                           int grid = 128);

} // namespace qcarpet
