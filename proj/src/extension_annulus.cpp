#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/extension.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// AnnulusDecomposition
// ---------------------------------------------------------------------------

int AnnulusDecomposition::cell_of_angle(double theta) const {
    // position of theta along the ladder direction, measured from u[0]
    const double p = dir > 0 ? cyclic_delta(wrap_angle(u[0]), wrap_angle(theta))
                             : cyclic_delta(wrap_angle(theta), wrap_angle(u[0]));
    double cum = 0.0;
    for (int j = 0; j < k; ++j) {
        cum += std::abs(delta(j));
        if (p < cum) return j;
    }
    return k - 1;
}

ClosedCurve AnnulusDecomposition::cell_polygon(int j, std::size_t arc_samples) const {
    const std::size_t m = std::max<std::size_t>(arc_samples, 2);
    std::vector<PointC> vs;
    vs.reserve(2 * m + 2);
    for (std::size_t i = 0; i <= m; ++i)
        vs.push_back(circle_point(u[j] + delta(j) * static_cast<double>(i) / m, 1.0));
    for (std::size_t i = m + 1; i-- > 0;)
        vs.push_back(circle_point(u[j] + delta(j) * static_cast<double>(i) / m, r));
    return ClosedCurve(std::move(vs));
}

double default_u0(const CircleMap& f, int k) {
    double best_angle = 0.0, best_sep = -1.0;
    for (double a : f.sample_angles()) {
        std::vector<double> orbit(1, a);
        double lift = a;
        for (int j = 1; j < k; ++j) {
            lift = f.eval_lift(lift);
            orbit.push_back(wrap_angle(lift));
        }
        double sep = kTau;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            for (std::size_t j2 = i + 1; j2 < orbit.size(); ++j2) {
                const double d = cyclic_delta(orbit[i], orbit[j2]);
                sep = std::min(sep, std::min(d, kTau - d));
            }
        }
        if (sep > best_sep) {
            best_sep = sep;
            best_angle = a;
        }
    }
    return best_angle;
}

AnnulusDecomposition decompose_annulus(const CircleMap& f, double r, double u0, int k) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("decompose: r must lie in (0,1)");
    if (k < 2) throw std::invalid_argument("decompose: k must be >= 2");
    if (!f.orientation_preserving()) throw std::invalid_argument("orientation");
    const double res = f.periodicity_residual(k);
    if (res > 1e-9) throw std::invalid_argument("decompose: map is not k-periodic at tolerance");

    AnnulusDecomposition dec;
    dec.f = f;
    dec.r = r;
    dec.k = k;
    dec.u.resize(k + 3);
    dec.u[0] = wrap_angle(u0);
    for (int j = 0; j + 1 < static_cast<int>(dec.u.size()); ++j)
        dec.u[j + 1] = f.eval_lift(dec.u[j]);

    // the k orbit points must be distinct
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const double d = cyclic_delta(wrap_angle(dec.u[i]), wrap_angle(dec.u[j]));
            if (std::min(d, kTau - d) < 1e-9)
                throw std::invalid_argument("degenerate orbit: choose different u0 or reduce k");
        }
    }
    // consecutive cyclic order: ladder steps share a sign and close up one turn
    const double total = dec.u[k] - dec.u[0];
    if (std::abs(std::abs(total) - kTau) > 1e-7)
        throw std::invalid_argument(
            "degenerate orbit: orbit of u0 is not in consecutive cyclic order");
    dec.dir = total > 0 ? 1 : -1;
    for (int j = 0; j < k; ++j)
        if (!(dec.delta(j) * dec.dir > 0))
            throw std::invalid_argument(
                "degenerate orbit: orbit of u0 is not in consecutive cyclic order");
    return dec;
}

// ---------------------------------------------------------------------------
// GlueMaps
// ---------------------------------------------------------------------------

GlueMaps::GlueMaps(AnnulusDecomposition dec) : dec_(std::move(dec)) {}

GlueMaps build_glue_maps(const AnnulusDecomposition& dec, const CircleMap& f) {
    // the decomposition already carries f; insist the two agree on the ladder
    for (int j = 0; j <= dec.k; ++j) {
        if (std::abs(f.eval_lift(dec.u[j]) - dec.u[j + 1]) > 1e-12)
            throw std::invalid_argument("glue maps: map does not generate the decomposition");
    }
    return GlueMaps(dec);
}

PointC GlueMaps::point_of(const CellBoundaryPoint& p) const {
    const auto& u = dec_.u;
    const double rad_out = 1.0, rad_in = dec_.r;
    switch (p.piece) {
        case CellPiece::seg_lo:
            return circle_point(u[p.j], rad_out - p.t * (rad_out - rad_in));
        case CellPiece::arc_outer:
            return circle_point(u[p.j] + p.t * dec_.delta(p.j), rad_out);
        case CellPiece::seg_hi:
            return circle_point(u[p.j + 1], rad_out - p.t * (rad_out - rad_in));
        case CellPiece::arc_inner:
            return circle_point(u[p.j] + p.t * dec_.delta(p.j), rad_in);
    }
    return {};
}

CellBoundaryPoint GlueMaps::apply(const CellBoundaryPoint& p) const {
    const auto& u = dec_.u;
    const auto& f = dec_.f;
    const int j = p.j;
    if (j < 0 || j >= dec_.k) throw std::invalid_argument("glue maps: cell index out of range");
    CellBoundaryPoint out;
    out.j = j + 1;
    switch (p.piece) {
        case CellPiece::seg_lo: {  // p_{j+1}^{-1} f p_j
            const double a = u[j] + p.t * dec_.delta(j);
            out.piece = CellPiece::seg_lo;
            out.t = (f.eval_lift(a) - u[j + 1]) / dec_.delta(j + 1);
            break;
        }
        case CellPiece::arc_outer: {  // f itself
            const double a = u[j] + p.t * dec_.delta(j);
            out.piece = CellPiece::arc_outer;
            out.t = (f.eval_lift(a) - u[j + 1]) / dec_.delta(j + 1);
            break;
        }
        case CellPiece::seg_hi: {  // p_{j+2}^{-1} f p_{j+1}
            const double a = u[j + 1] + p.t * dec_.delta(j + 1);
            out.piece = CellPiece::seg_hi;
            out.t = (f.eval_lift(a) - u[j + 2]) / dec_.delta(j + 2);
            break;
        }
        case CellPiece::arc_inner: {  // q_{j+1}^{-1} f q_j
            const double a = u[j + 1] + p.t * dec_.delta(j + 1);
            out.piece = CellPiece::arc_inner;
            out.t = (f.eval_lift(a) - u[j + 2]) / dec_.delta(j + 2);
            break;
        }
    }
    return out;
}

std::vector<CellBoundaryPoint> GlueMaps::boundary_samples(int j, std::size_t n) const {
    std::vector<CellBoundaryPoint> out;
    const std::size_t per = std::max<std::size_t>(n / 4, 2);
    for (int piece = 0; piece < 4; ++piece) {
        for (std::size_t i = 0; i < per; ++i) {
            const double t = (static_cast<double>(i) + 0.5) / per;
            out.push_back({j, static_cast<CellPiece>(piece), t});
        }
    }
    return out;
}

double GlueMaps::composite_identity_residual(std::size_t samples) const {
    double worst = 0.0;
    for (const auto& start : boundary_samples(0, samples)) {
        CellBoundaryPoint p = start;
        for (int j = 0; j < dec_.k; ++j) {
            p.j = j;  // h_j acts on C_j; the chain lands on C_{j+1}
            p = apply(p);
        }
        worst = std::max(worst, dist(point_of(start), point_of(p)));
    }
    return worst;
}

double GlueMaps::corner_continuity_residual(int j) const {
    auto img = [&](CellPiece piece, double t) {
        CellBoundaryPoint p{j, piece, t};
        return point_of(apply(p));
    };
    double worst = 0.0;
    worst = std::max(worst, dist(img(CellPiece::seg_lo, 0), img(CellPiece::arc_outer, 0)));
    worst = std::max(worst, dist(img(CellPiece::arc_outer, 1), img(CellPiece::seg_hi, 0)));
    worst = std::max(worst, dist(img(CellPiece::seg_lo, 1), img(CellPiece::arc_inner, 0)));
    worst = std::max(worst, dist(img(CellPiece::seg_hi, 1), img(CellPiece::arc_inner, 1)));
    return worst;
}

// ---------------------------------------------------------------------------
// AnnulusPeriodicMap
// ---------------------------------------------------------------------------

namespace {

CellBoundaryPoint tag_from_square(int j, PointC uv) {
    // classify the dominating edge of [-1,1]^2
    CellBoundaryPoint p;
    p.j = j;
    if (std::abs(uv.x) >= std::abs(uv.y)) {
        p.piece = uv.x < 0 ? CellPiece::seg_lo : CellPiece::seg_hi;
        p.t = (1 - std::clamp(uv.y, -1.0, 1.0)) / 2;
    } else {
        p.piece = uv.y > 0 ? CellPiece::arc_outer : CellPiece::arc_inner;
        p.t = (std::clamp(uv.x, -1.0, 1.0) + 1) / 2;
    }
    return p;
}

PointC square_of_tag(const CellBoundaryPoint& p) {
    switch (p.piece) {
        case CellPiece::seg_lo: return {-1.0, 1 - 2 * p.t};
        case CellPiece::seg_hi: return {1.0, 1 - 2 * p.t};
        case CellPiece::arc_outer: return {2 * p.t - 1, 1.0};
        case CellPiece::arc_inner: return {2 * p.t - 1, -1.0};
    }
    return {};
}

} // namespace

AnnulusPeriodicMap::AnnulusPeriodicMap(const CircleMap& f, double r, int k, int grid)
    : r_(r), k_(k), grid_(grid), f_(f) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("annulus extension: r must lie in (0,1)");
    if (k < 1) throw std::invalid_argument("annulus extension: k must be >= 1");
    if (!f.orientation_preserving()) throw std::invalid_argument("orientation");
    if (k == 1) return;  // radial glue of f

    dec_ = decompose_annulus(f, r, default_u0(f, k), k);
    const GlueMaps glue(*dec_);
    const double ymax = 6.0;
    for (int j = 0; j + 1 < k_; ++j) {
        // conjugate h_j to a circle map; the square tags mirror the charts'
        // boundary correspondence, so no geometry is needed here
        std::vector<double> angles(grid_), images(grid_);
        for (int i = 0; i < grid_; ++i) {
            const double xi = kTau * i / grid_;
            const PointC uv = disk_to_square(circle_point(xi));
            const CellBoundaryPoint tagged = tag_from_square(j, uv);
            const CellBoundaryPoint out = glue.apply(tagged);
            const PointC w = square_to_disk(square_of_tag(out));
            angles[i] = xi;
            images[i] = wrap_angle(std::atan2(w.y, w.x));
        }
        cells_.push_back(std::make_shared<BaHalfPlaneMap>(CircleMap(angles, images), grid_,
                                                          grid_, ymax));
    }
}

const AnnulusDecomposition& AnnulusPeriodicMap::decomposition() const {
    if (!dec_) throw std::logic_error("annulus extension: no decomposition for k = 1");
    return *dec_;
}

PointC AnnulusPeriodicMap::apply_cell(int j, PointC z) const {
    const SectorDiskChart cj = dec_->chart(j);
    const SectorDiskChart cj1 = dec_->chart(j + 1);
    return cj1.from_disk(cells_[j]->eval_disk(cj.to_disk(z)));
}

PointC AnnulusPeriodicMap::apply_cell_inverse(int j, PointC z) const {
    const SectorDiskChart cj = dec_->chart(j);
    const SectorDiskChart cj1 = dec_->chart(j + 1);
    return cj.from_disk(cells_[j]->inverse_disk(cj1.to_disk(z)));
}

PointC AnnulusPeriodicMap::eval(PointC z) const {
    if (k_ == 1) {
        const double rr = z.norm();
        if (!(rr > 0)) throw std::domain_error("out of domain");
        return circle_point(f_.eval_lift(std::atan2(z.y, z.x)), rr);
    }
    const double theta = std::atan2(z.y, z.x);
    const int j = dec_->cell_of_angle(theta);
    if (j <= k_ - 2) return apply_cell(j, z);
    PointC w = z;
    for (int j2 = k_ - 2; j2 >= 0; --j2) w = apply_cell_inverse(j2, w);
    return w;
}

double AnnulusPeriodicMap::boundary_agreement(std::size_t samples) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = kTau * static_cast<double>(i) / samples;
        worst = std::max(worst, dist(eval(circle_point(t)), circle_point(f_.eval_lift(t))));
    }
    return worst;
}

double AnnulusPeriodicMap::boundary_sample_spacing() const {
    double worst = 0.0;
    for (int i = 0; i < grid_; ++i) {
        const double a = f_.eval_lift(kTau * i / grid_);
        const double b = f_.eval_lift(kTau * (i + 1) / grid_);
        worst = std::max(worst, dist(circle_point(a), circle_point(b)));
    }
    return worst;
}

std::vector<double> AnnulusPeriodicMap::cell_dilatations(int probes) const {
    if (k_ == 1) return {1.0};
    std::vector<double> out;
    const double duc = 0.69 / grid_;  // roughly one extension-grid cell, in chart units
    for (int j = 0; j < k_; ++j) {
        const double t0 = dec_->u[j], dt = dec_->delta(j);
        const double s0 = std::log(r_);
        double worst = 1.0;
        for (int a = 1; a < probes; ++a) {
            for (int b = 1; b < probes; ++b) {
                const double theta = t0 + dt * (0.06 + 0.88 * a / probes);
                const double s = s0 * (0.06 + 0.88 * b / probes);
                const double hs = std::max(std::abs(s0) / (3.0 * probes), duc);
                const double ht = std::max(std::abs(dt) / (3.0 * probes), duc);
                const PointC f0 = eval(circle_point(theta, std::exp(s)));
                double mx = 0, mn = std::numeric_limits<double>::infinity();
                for (int es = -1; es <= 1; ++es) {
                    for (int et = -1; et <= 1; ++et) {
                        if (es == 0 && et == 0) continue;
                        const PointC f1 =
                            eval(circle_point(theta + et * ht, std::exp(s + es * hs)));
                        const double ratio = dist(f0, f1) / std::hypot(es * hs, et * ht);
                        mx = std::max(mx, ratio);
                        mn = std::min(mn, ratio);
                    }
                }
                if (mn > 0) worst = std::max(worst, mx / mn);
            }
        }
        out.push_back(worst);
    }
    return out;
}

PlaneMap AnnulusPeriodicMap::to_plane_map(int ns, int ntheta) const {
    return PlaneMap(Region::annulus(r_), ns, ntheta, [this](PointC z) { return eval(z); });
}

AnnulusPeriodicMap periodic_annulus_extension(const CircleMap& f, double r, int k, int grid) {
    return AnnulusPeriodicMap(f, r, k, grid);
}

} // namespace qcarpet
