#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/extension.hpp"
#include "qcarpet/util.hpp"

namespace qcarpet {

PointC reflect(PointC z, double r) {
    const double n2 = z.norm2();
    if (!(n2 > 0)) throw std::domain_error("pole");
    const double s = r * r / n2;
    return {z.x * s, z.y * s};
}

// ---------------------------------------------------------------------------
// BaHalfPlaneMap
// ---------------------------------------------------------------------------

BaHalfPlaneMap::BaHalfPlaneMap(const CircleMap& boundary, int nx, int ny, double ymax)
    : boundary_(boundary), nx_(nx), ny_(ny), ymax_(ymax) {
    if (!boundary.orientation_preserving()) throw std::invalid_argument("orientation");
    if (nx_ < 8 || ny_ < 2 || !(ymax_ > 0)) throw std::invalid_argument("ba: bad grid");
    dx_ = kTau / nx_;
    dy_ = ymax_ / ny_;

    // exact antiderivative of the PL lift at its breakpoints
    const auto& xs = boundary_.breakpoints();
    const auto& ys = boundary_.lift_values();
    cumint_.assign(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        cumint_[i + 1] = cumint_[i] + 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
    // closing segment up to xs[0] + 2pi, image ys[0] + 2pi
    cumint_[xs.size()] = cumint_[xs.size() - 1] +
                         0.5 * (ys.back() + ys.front() + kTau) * (xs.front() + kTau - xs.back());

    u_.resize(static_cast<std::size_t>(ny_ + 1) * nx_);
    v_.resize(u_.size());
    parallel_for(u_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) {
            const int iy = static_cast<int>(n) / nx_;
            const int ix = static_cast<int>(n) % nx_;
            exact_uv(ix * dx_, iy * dy_, u_[n], v_[n]);
        }
    });
}

double BaHalfPlaneMap::lift_integral(double x) const {
    const auto& xs = boundary_.breakpoints();
    const auto& ys = boundary_.lift_values();
    const double x0 = xs.front();
    const double m = std::floor((x - x0) / kTau);
    const double xr = x - m * kTau;
    // integral over [x0, xr] of the base period
    std::size_t lo = std::upper_bound(xs.begin(), xs.end(), xr) - xs.begin();
    double base;
    if (lo == 0) {
        base = 0.0;
    } else {
        const double xa = xs[lo - 1];
        const double ya = ys[lo - 1];
        const double xb = (lo < xs.size()) ? xs[lo] : xs.front() + kTau;
        const double yb = (lo < xs.size()) ? ys[lo] : ys.front() + kTau;
        const double t = xr - xa;
        base = cumint_[lo - 1] + ya * t + (yb - ya) * t * t / (2 * (xb - xa));
    }
    const double period_int = cumint_[xs.size()];
    return m * period_int + kTau * kTau * m * (m - 1) / 2 + base + kTau * m * (xr - x0);
}

void BaHalfPlaneMap::exact_uv(double x, double y, double& u, double& v) const {
    if (y < 1e-14) {
        u = boundary_.eval_lift(x);
        v = 0.0;
        return;
    }
    const double ip = lift_integral(x + y);
    const double im = lift_integral(x - y);
    const double ic = lift_integral(x);
    u = (ip - im) / (2 * y);
    v = (ip - 2 * ic + im) / y;
}

double BaHalfPlaneMap::u_at(int iy, int ix) const {
    const int w = ix >= nx_ ? 1 : (ix < 0 ? -1 : 0);
    const int ixw = ix - w * nx_;
    return u_[idx(iy, ixw)] + w * kTau;
}

double BaHalfPlaneMap::v_at(int iy, int ix) const {
    int ixw = ix % nx_;
    if (ixw < 0) ixw += nx_;
    return v_[idx(iy, ixw)];
}

void BaHalfPlaneMap::eval_uv(double x, double y, double& u, double& v) const {
    const double m = std::floor(x / kTau);
    const double xr = x - m * kTau;
    double fy = y / dy_;
    if (y > ymax_) {
        // rigid radial continuation below the innermost grid ring
        double ub, vb;
        eval_uv(xr, ymax_, ub, vb);
        u = ub + m * kTau;
        v = vb + (y - ymax_);
        return;
    }
    fy = std::clamp(fy, 0.0, static_cast<double>(ny_));
    const double fx = std::clamp(xr / dx_, 0.0, static_cast<double>(nx_));
    const int iy = std::min(static_cast<int>(fy), ny_ - 1);
    const int ix = std::min(static_cast<int>(fx), nx_ - 1);
    const double ty = fy - iy, tx = fx - ix;
    const double u00 = u_at(iy, ix), u10 = u_at(iy, ix + 1);
    const double u01 = u_at(iy + 1, ix), u11 = u_at(iy + 1, ix + 1);
    const double v00 = v_at(iy, ix), v10 = v_at(iy, ix + 1);
    const double v01 = v_at(iy + 1, ix), v11 = v_at(iy + 1, ix + 1);
    u = (1 - ty) * ((1 - tx) * u00 + tx * u10) + ty * ((1 - tx) * u01 + tx * u11) + m * kTau;
    v = (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

PointC BaHalfPlaneMap::eval_disk(PointC z) const {
    const double rr = z.norm();
    if (!(rr > 0)) return {0, 0};
    const double x = std::atan2(z.y, z.x);
    const double y = std::max(0.0, -std::log(std::min(rr, 1.0)));
    double u, v;
    eval_uv(x, y, u, v);
    return circle_point(u, std::exp(-v));
}

bool BaHalfPlaneMap::cell_solve(int iy, int ix, double tu, double tv, double& x, double& y) const {
    // solve bilinear (u,v)(x,y) = (tu,tv) inside cell (iy, ix); returns local
    // coordinates through (x,y) on success
    const double u00 = u_at(iy, ix), u10 = u_at(iy, ix + 1);
    const double u01 = u_at(iy + 1, ix), u11 = u_at(iy + 1, ix + 1);
    const double v00 = v_at(iy, ix), v10 = v_at(iy, ix + 1);
    const double v01 = v_at(iy + 1, ix), v11 = v_at(iy + 1, ix + 1);
    const double eux = (u10 - u00 + u11 - u01) * 0.5, euy = (u01 - u00 + u11 - u10) * 0.5;
    const double evx = (v10 - v00 + v11 - v01) * 0.5, evy = (v01 - v00 + v11 - v10) * 0.5;
    const double det = eux * evy - euy * evx;
    if (std::abs(det) < 1e-300) return false;
    double a = 0.5, b = 0.5;
    const double tol = 1e-13 * (std::abs(eux) + std::abs(euy) + std::abs(evx) + std::abs(evy) + 1);
    for (int it = 0; it < 60; ++it) {
        const double fu = (1 - b) * ((1 - a) * u00 + a * u10) + b * ((1 - a) * u01 + a * u11) - tu;
        const double fv = (1 - b) * ((1 - a) * v00 + a * v10) + b * ((1 - a) * v01 + a * v11) - tv;
        if (std::abs(fu) + std::abs(fv) <= tol) break;
        a -= (fu * evy - fv * euy) / det;
        b -= (eux * fv - evx * fu) / det;
        if (a < -3 || a > 4 || b < -3 || b > 4) break;
    }
    x = (ix + a) * dx_;
    y = (iy + b) * dy_;
    return a > -1e-9 && a < 1 + 1e-9 && b > -1e-9 && b < 1 + 1e-9;
}

PointC BaHalfPlaneMap::inverse_disk(PointC w) const {
    const double rr = w.norm();
    if (!(rr > 0)) return {0, 0};
    const double vstar = std::max(0.0, -std::log(std::min(rr, 1.0)));
    double ustar = std::atan2(w.y, w.x);
    {
        const double lo = u_[idx(0, 0)];
        double t = ustar - lo;
        t -= kTau * std::floor(t / kTau);
        ustar = lo + t;
    }

    // PL inverse of u along a row (cyclic in x)
    auto row_x_of_u = [&](int iy, double uu) {
        double t = uu - u_at(iy, 0);
        t -= kTau * std::floor(t / kTau);
        const double target = u_at(iy, 0) + t;
        int lo = 0, hi = nx_;  // u_at(iy, nx_) = u_at(iy,0) + 2pi
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (u_at(iy, mid) <= target) lo = mid;
            else hi = mid;
        }
        const double ua = u_at(iy, lo), ub = u_at(iy, lo + 1);
        const double s = (ub - ua) > 0 ? (target - ua) / (ub - ua) : 0.0;
        return (lo + s) * dx_;
    };
    auto row_v_at = [&](int iy, double x) {
        const double fx = std::clamp(x / dx_, 0.0, static_cast<double>(nx_));
        const int ix = std::min(static_cast<int>(fx), nx_ - 1);
        const double tx = fx - ix;
        return (1 - tx) * v_at(iy, ix) + tx * v_at(iy, ix + 1);
    };

    // cap region
    {
        const double xc = row_x_of_u(ny_, ustar);
        const double vc = row_v_at(ny_, xc);
        if (vstar >= vc - 1e-12) {
            const double y = ymax_ + std::max(0.0, vstar - vc);
            if (y >= ymax_) return circle_point(xc, std::exp(-y));
        }
    }

    // bracket the fiber row (v increases along the fiber for our maps;
    // verified by the scan fallback)
    int iy_lo = 0;
    for (int iy = 0; iy < ny_; ++iy) {
        const double xn = row_x_of_u(iy + 1, ustar);
        if (row_v_at(iy + 1, xn) >= vstar) {
            iy_lo = iy;
            break;
        }
        iy_lo = iy;
    }

    // local cell walk around the bracket
    const double x_seed = row_x_of_u(iy_lo, ustar);
    int ix = std::clamp(static_cast<int>(x_seed / dx_), 0, nx_ - 1);
    int iy = iy_lo;
    for (int step = 0; step < 4 * (nx_ + ny_); ++step) {
        double x, y;
        if (cell_solve(iy, ix, ustar, vstar, x, y)) return circle_point(x, std::exp(-y));
        // move toward the target using the cell's corner values
        const double uc = 0.25 * (u_at(iy, ix) + u_at(iy, ix + 1) + u_at(iy + 1, ix) + u_at(iy + 1, ix + 1));
        const double vc = 0.25 * (v_at(iy, ix) + v_at(iy, ix + 1) + v_at(iy + 1, ix) + v_at(iy + 1, ix + 1));
        int nix = ix, niy = iy;
        double du = ustar - uc;
        du -= kTau * std::round(du / kTau);
        if (du > 0.5 * (u_at(iy, ix + 1) - u_at(iy, ix))) nix = ix + 1;
        else if (du < -0.5 * (u_at(iy, ix + 1) - u_at(iy, ix))) nix = ix - 1;
        if (vstar > vc + 0.25 * (v_at(iy + 1, ix) - v_at(iy, ix))) niy = iy + 1;
        else if (vstar < vc - 0.25 * (v_at(iy, ix) - v_at(std::max(iy - 1, 0), ix))) niy = iy - 1;
        if (nix >= nx_) nix -= nx_;
        if (nix < 0) nix += nx_;
        niy = std::clamp(niy, 0, ny_ - 1);
        if (nix == ix && niy == iy) break;
        ix = nix;
        iy = niy;
    }

    // exhaustive fallback (should not trigger for homeomorphic data)
    for (int ay = 0; ay < ny_; ++ay) {
        for (int ax = 0; ax < nx_; ++ax) {
            double x, y;
            if (cell_solve(ay, ax, ustar, vstar, x, y)) return circle_point(x, std::exp(-y));
        }
    }
    throw std::domain_error("out of domain: no preimage in the extension grid");
}

PlaneMap ba_extend(const CircleMap& boundary, int ns, int ntheta, double inner_cutoff) {
    const double ymax = -std::log(inner_cutoff);
    BaHalfPlaneMap ba(boundary, ntheta, ns, ymax);
    Region disk = Region::disk(inner_cutoff);
    return PlaneMap(disk, ns, ntheta, [&](PointC z) {
        const double rr = z.norm();
        if (!(rr > 0)) return PointC{0, 0};
        double u, v;
        ba.exact_uv(std::atan2(z.y, z.x), -std::log(std::min(rr, 1.0)), u, v);
        return circle_point(u, std::exp(-v));
    });
}

} // namespace qcarpet
