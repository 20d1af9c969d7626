#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/extension.hpp"
#include "qcarpet/util.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// ReflectionTower
// ---------------------------------------------------------------------------

ReflectionTower::ReflectionTower(PlaneFn f0, double r, int depth)
    : f0_(std::move(f0)), r_(r), depth_(depth) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("tower: r must lie in (0,1)");
    if (depth_ < 0 || depth_ > 40) throw std::invalid_argument("tower: bad depth");
    rho_.resize(depth_ + 1);
    rho_[0] = r_;
    for (int m = 1; m <= depth_; ++m) rho_[m] = rho_[m - 1] * rho_[m - 1];
}

PointC ReflectionTower::eval_level(PointC z, int m) const {
    const double rr = z.norm();
    if (m == 0 || rr >= r_) return f0_(z);
    if (rr >= rho_[m - 1]) return eval_level(z, m - 1);
    const double rho = rho_[m - 1];
    return reflect(eval_level(reflect(z, rho), m - 1), rho);
}

PointC ReflectionTower::eval(PointC z) const {
    const double rr = z.norm();
    if (rr >= rho_.back()) return eval_level(z, depth_);
    // rigid radial cap pinned at the origin
    if (!(rr > 0)) return {0, 0};
    const double theta = std::atan2(z.y, z.x);
    const PointC ring = eval_level(circle_point(theta, rho_.back()), depth_);
    return ring * (rr / rho_.back());
}

TowerManifest ReflectionTower::ring_residuals(int k, std::size_t probes_per_ring) const {
    TowerManifest out;
    for (int m = 0; m <= depth_; ++m) {
        const double lo = rho_[m];
        const double hi = m == 0 ? 1.0 : rho_[m - 1];
        double worst = 0.0;
        for (std::size_t i = 0; i < probes_per_ring; ++i) {
            const PointC q = kronecker2(i);
            const double rr = lo + (hi - lo) * (0.05 + 0.9 * q.x);
            const PointC z = circle_point(kTau * q.y, rr);
            PointC w = z;
            for (int it = 0; it < k; ++it) w = eval(w);
            worst = std::max(worst, dist(w, z));
        }
        out.rings.push_back({lo, worst});
    }
    for (std::size_t m = 0; m + 1 < out.rings.size(); ++m)
        if (out.rings[m + 1].residual + 1e-15 < out.rings[m].residual) out.monotone = false;
    return out;
}

int default_tower_depth(double r, double grid_spacing) {
    if (!(grid_spacing > 0 && grid_spacing < 1)) return 3;
    const double need = std::log(grid_spacing) / std::log(r);  // want r^{2^M} < spacing
    int m = static_cast<int>(std::ceil(std::log2(std::max(need, 1.0))));
    return std::clamp(m, 1, 24);
}

ReflectionTower reflection_tower_extend(const PlaneFn& f0, double r, int depth,
                                        double boundary_tol) {
    // f0 must preserve both boundary circles of A_r
    const double tol = boundary_tol * (1 - r);
    for (int i = 0; i < 256; ++i) {
        const double t = kTau * i / 256.0;
        const double d_outer = std::abs(f0(circle_point(t, 1.0)).norm() - 1.0);
        const double d_inner = std::abs(f0(circle_point(t, r)).norm() - r);
        if (d_outer > tol || d_inner > tol) throw std::invalid_argument("boundary not preserved");
    }
    return ReflectionTower(f0, r, depth);
}

// ---------------------------------------------------------------------------
// PlaneWindowMap
// ---------------------------------------------------------------------------

PointC PlaneWindowMap::eval(PointC z) const {
    if (z.norm() <= 1.0) return inner_(z);
    const PointC w = reflect(z, 1.0);
    return reflect(inner_(w), 1.0);
}

PlaneMap PlaneWindowMap::to_plane_map(int n, double half) const {
    return PlaneMap(Region::window(half), n, n, [this](PointC z) { return eval(z); });
}

PlaneWindowMap extend_to_plane(PlaneFn disk_map) { return PlaneWindowMap(std::move(disk_map)); }

} // namespace qcarpet
