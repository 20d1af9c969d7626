#include "qcarpet/charts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcarpet {

PointC square_to_disk(PointC uv) {
    const double u = uv.x, v = uv.y;
    return {u * std::sqrt(std::max(0.0, 1.0 - v * v / 2)),
            v * std::sqrt(std::max(0.0, 1.0 - u * u / 2))};
}

PointC disk_to_square(PointC p) {
    const double x = p.x, y = p.y;
    const double x2 = x * x, y2 = y * y;
    const double s = 2.0 * std::sqrt(2.0);
    const double au = 2.0 + x2 - y2;
    const double av = 2.0 - x2 + y2;
    const double u = 0.5 * (std::sqrt(std::max(0.0, au + s * x)) -
                            std::sqrt(std::max(0.0, au - s * x)));
    const double v = 0.5 * (std::sqrt(std::max(0.0, av + s * y)) -
                            std::sqrt(std::max(0.0, av - s * y)));
    return {std::clamp(u, -1.0, 1.0), std::clamp(v, -1.0, 1.0)};
}

PointC SectorDiskChart::to_disk(PointC z) const {
    const double rho = z.norm();
    if (!(rho > 0)) throw std::domain_error("out of domain: sector chart at the origin");
    double theta = std::atan2(z.y, z.x);
    // unwrap theta near the sector window [t0, t0+dt]
    const double mid = t0 + dt / 2;
    theta += kTau * std::round((mid - theta) / kTau);
    const double u = 2 * (theta - t0) / dt - 1;
    const double v = 2 * (rho - r) / (1 - r) - 1;
    return square_to_disk({u, v});
}

PointC SectorDiskChart::from_disk(PointC p) const {
    const PointC uv = disk_to_square(p);
    const double theta = t0 + (uv.x + 1) / 2 * dt;
    const double rho = r + (uv.y + 1) / 2 * (1 - r);
    return circle_point(theta, rho);
}

} // namespace qcarpet
