#pragma once

#include "qcarpet/point.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// Square <-> disk: the elliptical grid mapping
//   x = u sqrt(1 - v^2/2),  y = v sqrt(1 - u^2/2)
// a homeomorphism of [-1,1]^2 onto the closed unit disk with a closed-form
// inverse, equivariant under the dihedral symmetries of the square.
// ---------------------------------------------------------------------------

PointC square_to_disk(PointC uv);
PointC disk_to_square(PointC xy);

/// A bilipschitz chart from a planar cell onto the closed unit disk.
struct DiskChart {
    virtual ~DiskChart() = default;
    virtual PointC to_disk(PointC z) const = 0;
    virtual PointC from_disk(PointC w) const = 0;
};

/// Axis-aligned square cell (translate + scale, then elliptical).
struct SquareDiskChart final : DiskChart {
    PointC center{0, 0};
    double half = 1.0;

    SquareDiskChart() = default;
    SquareDiskChart(PointC c, double side) : center(c), half(side / 2) {}
    PointC to_disk(PointC z) const override {
        return square_to_disk({(z.x - center.x) / half, (z.y - center.y) / half});
    }
    PointC from_disk(PointC w) const override {
        const PointC uv = disk_to_square(w);
        return {center.x + half * uv.x, center.y + half * uv.y};
    }
};

/// Axis-aligned rectangle [x0, x0+w] x [y0, y0+h] (anisotropic affine, then
/// elliptical); bilipschitz, which is all the construction needs.
struct RectDiskChart final : DiskChart {
    double x0 = 0, y0 = 0, w = 1, h = 1;

    RectDiskChart() = default;
    RectDiskChart(double rx0, double ry0, double rw, double rh) : x0(rx0), y0(ry0), w(rw), h(rh) {}
    PointC to_disk(PointC z) const override {
        return square_to_disk({2 * (z.x - x0) / w - 1, 2 * (z.y - y0) / h - 1});
    }
    PointC from_disk(PointC p) const override {
        const PointC uv = disk_to_square(p);
        return {x0 + (uv.x + 1) * w / 2, y0 + (uv.y + 1) * h / 2};
    }
};

/// Annular sector {rho in [r,1], theta in [t0, t0+dt]} (polar rectangle,
/// affine in (theta, rho), then elliptical). dt may be negative for
/// clockwise cells.
struct SectorDiskChart final : DiskChart {
    double r = 0.5, t0 = 0, dt = 1;

    SectorDiskChart() = default;
    SectorDiskChart(double rr, double theta0, double dtheta) : r(rr), t0(theta0), dt(dtheta) {}
    PointC to_disk(PointC z) const override;
    PointC from_disk(PointC p) const override;
};

} // namespace qcarpet
