#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qcarpet/geometry.hpp"
#include "qcarpet/point.hpp"

namespace qcarpet {

/// Any plane-to-plane map; the glue for functional composites.
using PlaneFn = std::function<PointC(PointC)>;

// ---------------------------------------------------------------------------
// PlaneMap
//
// A map sampled on a regular lattice over a region's chart rectangle,
// evaluated by bilinear interpolation (wrapping in the periodic chart
// direction). Charts of the log-polar kinds are conformal, so the 8-compass
// dilatation estimate computed in chart coordinates matches the planar one.
// ---------------------------------------------------------------------------

class PlaneMap {
public:
    PlaneMap() = default;
    /// Samples fn at the lattice nodes of `region` with nu x nv cells.
    PlaneMap(Region region, int nu, int nv, const std::function<PointC(PointC)>& fn);
    /// Adopts precomputed node values (row-major over u, then v).
    PlaneMap(Region region, int nu, int nv, std::vector<PointC> values);

    static PlaneMap identity(Region region, int nu, int nv);

    const Region& domain() const { return region_; }
    int nu() const { return nu_; }
    int nv() const { return nv_; }
    double du() const { return du_; }
    double dv() const { return dv_; }
    std::size_t node_count() const { return values_.size(); }
    const std::vector<PointC>& values() const { return values_; }

    PointC node(int iu, int iv) const { return values_[index(iu, iv)]; }
    PointC node_point(int iu, int iv) const;  // lattice point in the plane
    void chart_of_node(int iu, int iv, double& u, double& v) const;

    /// Bilinear evaluation at a plane point; throws "out of domain" when the
    /// point cannot be charted (slack of one cell is tolerated).
    PointC eval(PointC p) const;
    PointC eval_chart(double u, double v) const;

    /// Solves eval(z) = w for z (self-map assumption: w charted over the same
    /// region). Fixed-point local solve per cell with a nearest-node seed;
    /// at most `max_iter` sweeps, declared failed beyond `tol` cell-relative
    /// residual.
    std::optional<PointC> solve_preimage(PointC w, int max_iter = 20, double tol = 1e-10) const;

    /// Materialized inverse on the same lattice. Throws "out of domain" if a
    /// node has no preimage at tolerance.
    PlaneMap invert() const;

    /// Max over interior nodes of the compass max/min displacement ratio,
    /// each direction normalized by its own chart length. Throws
    /// "collapsed node" when the min displacement vanishes.
    double dilatation_estimate() const;

    /// Fraction of cells whose corner parallelogram has negative orientation.
    double folded_cell_fraction() const;

    int index(int iu, int iv) const;

private:
    Region region_;
    int nu_ = 0, nv_ = 0;          // cell counts
    double du_ = 0, dv_ = 0;
    bool wrap_v_ = false;
    std::vector<PointC> values_;   // (nu+1) x nv_nodes

    // node bins over the value bounding box, for preimage seeds
    struct BinIndex {
        double x0 = 0, y0 = 0, cw = 1, ch = 1;
        int g = 0;
        std::vector<std::vector<int>> cells;
    };
    BinIndex bins_;

    void build_bins();
    int seed_node(PointC w) const;

    int nv_nodes() const { return wrap_v_ ? nv_ : nv_ + 1; }
};

/// Composition by interpolation-then-lookup, sampled on g's lattice.
PlaneMap compose(const PlaneMap& f, const PlaneMap& g);

/// Pointwise n-fold iteration residual against the identity over probe
/// points: returns max |f^n(p) - p|.
double iteration_residual(const PlaneFn& f, int n, const std::vector<PointC>& probes);

/// Probe points for a region: low-discrepancy over the chart rectangle,
/// mapped to the plane (interior, edge-avoiding).
std::vector<PointC> region_probes(const Region& region, std::size_t count);

struct PeriodicProbeResult {
    bool periodic = false;
    double residual = 0.0;
};
PeriodicProbeResult is_periodic(const PlaneMap& f, int k, double tol);

} // namespace qcarpet
