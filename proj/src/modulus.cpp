#include "qcarpet/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcarpet {

// ---------------------------------------------------------------------------
// GridSpec / PathFamily / Density
// ---------------------------------------------------------------------------

GridSpec::GridSpec(const Region& r, int nx_, int ny_) : region(r), nx(nx_), ny(ny_) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("grid: bad resolution");
    const ChartRect c = region.chart();
    du = c.du() / nx;
    dv = c.dv() / ny;
}

bool GridSpec::compatible(const GridSpec& o) const {
    return region.kind == o.region.kind && nx == o.nx && ny == o.ny &&
           std::abs(du - o.du) < 1e-12 && std::abs(dv - o.dv) < 1e-12;
}

PathFamily PathFamily::product(const Region& region, FamilyKind kind) {
    if (kind == FamilyKind::custom) throw std::invalid_argument("family: product kind required");
    PathFamily f;
    f.region = region;
    f.kind = kind;
    return f;
}

PathFamily PathFamily::custom(const Region& region, std::vector<std::vector<PointC>> paths) {
    PathFamily f;
    f.region = region;
    f.kind = FamilyKind::custom;
    f.paths = std::move(paths);
    if (f.paths.empty()) throw std::invalid_argument("family: empty");
    return f;
}

std::vector<std::vector<PointC>> PathFamily::paths_at(const GridSpec& grid) const {
    if (kind == FamilyKind::custom) return paths;
    const ChartRect c = region.chart();
    std::vector<std::vector<PointC>> out;
    const bool along_v = (kind == FamilyKind::vertical || kind == FamilyKind::circular);
    // vertical: one path per u-column running in v; horizontal: one per
    // v-row running in u. On log-cylinders "radial" runs in u and
    // "circular" in v.
    if (kind == FamilyKind::radial) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double v = c.v0 + (iy + 0.5) * grid.dv;
            out.push_back({{c.u0, v}, {c.u1, v}});
        }
        return out;
    }
    if (along_v) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double u = c.u0 + (ix + 0.5) * grid.du;
            out.push_back({{u, c.v0}, {u, c.v1}});
        }
    } else {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double v = c.v0 + (iy + 0.5) * grid.dv;
            out.push_back({{c.u0, v}, {c.u1, v}});
        }
    }
    return out;
}

FamilyKind family_kind_from_name(const std::string& name) {
    if (name == "vertical") return FamilyKind::vertical;
    if (name == "horizontal") return FamilyKind::horizontal;
    if (name == "radial") return FamilyKind::radial;
    if (name == "circular") return FamilyKind::circular;
    throw std::invalid_argument("family: unknown kind '" + name + "'");
}

std::string family_kind_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::vertical: return "vertical";
        case FamilyKind::horizontal: return "horizontal";
        case FamilyKind::radial: return "radial";
        case FamilyKind::circular: return "circular";
        case FamilyKind::custom: return "custom";
    }
    return "?";
}

double Density::integral_sq() const {
    double s = 0;
    for (double v : values) s += v * v;
    return s * grid.cell_area();
}

double Density::l2_deviation_from(double reference) const {
    double num = 0;
    for (double v : values) num += (v - reference) * (v - reference);
    const double den = reference * reference * values.size();
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num * grid.cell_area());
}

PathCrossings rasterize_path(const std::vector<PointC>& path, const GridSpec& grid) {
    if (path.size() < 2) throw std::invalid_argument("degenerate path");
    const ChartRect c = grid.region.chart();
    PathCrossings out;
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        const PointC p = path[s], q = path[s + 1];
        const double seg_len = dist(p, q);
        if (seg_len <= 0) continue;
        // parametric splits at every grid line crossing
        std::vector<double> ts{0.0, 1.0};
        const double dux = q.x - p.x, dvy = q.y - p.y;
        if (std::abs(dux) > 0) {
            const int i0 = static_cast<int>(std::floor((std::min(p.x, q.x) - c.u0) / grid.du)) - 1;
            const int i1 = static_cast<int>(std::ceil((std::max(p.x, q.x) - c.u0) / grid.du)) + 1;
            for (int i = std::max(i0, 0); i <= std::min(i1, grid.nx); ++i) {
                const double t = (c.u0 + i * grid.du - p.x) / dux;
                if (t > 0 && t < 1) ts.push_back(t);
            }
        }
        if (std::abs(dvy) > 0) {
            const int j0 = static_cast<int>(std::floor((std::min(p.y, q.y) - c.v0) / grid.dv)) - 1;
            const int j1 = static_cast<int>(std::ceil((std::max(p.y, q.y) - c.v0) / grid.dv)) + 1;
            for (int j = std::max(j0, 0); j <= std::min(j1, grid.ny); ++j) {
                const double t = (c.v0 + j * grid.dv - p.y) / dvy;
                if (t > 0 && t < 1) ts.push_back(t);
            }
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            const double tm = 0.5 * (ts[i] + ts[i + 1]);
            const double len = (ts[i + 1] - ts[i]) * seg_len;
            if (len <= 0) continue;
            const PointC mid{p.x + tm * dux, p.y + tm * dvy};
            int ix = static_cast<int>(std::floor((mid.x - c.u0) / grid.du));
            int iy = static_cast<int>(std::floor((mid.y - c.v0) / grid.dv));
            ix = std::clamp(ix, 0, grid.nx - 1);
            iy = std::clamp(iy, 0, grid.ny - 1);
            out.cells.emplace_back(grid.cell_index(ix, iy), len);
            out.length += len;
        }
    }
    if (!(out.length > 0)) throw std::invalid_argument("degenerate path");
    return out;
}

// ---------------------------------------------------------------------------
// Modulus solver: dual coordinate ascent with a final primal projection
// ---------------------------------------------------------------------------

ModulusResult modulus(const PathFamily& family, int nx, int ny, ModulusOptions opts) {
    const GridSpec grid(family.region, nx, ny);
    const auto geo_paths = family.paths_at(grid);
    if (geo_paths.empty()) throw std::invalid_argument("family: empty");

    std::vector<PathCrossings> cross;
    cross.reserve(geo_paths.size());
    double min_len = std::numeric_limits<double>::infinity();
    for (const auto& p : geo_paths) {
        cross.push_back(rasterize_path(p, grid));
        min_len = std::min(min_len, cross.back().length);
    }

    const double area = grid.cell_area();
    const std::size_t np = cross.size();
    std::vector<double> curvature(np, 0.0);  // c_p = sum len^2 / (2 A)
    for (std::size_t p = 0; p < np; ++p) {
        double cp = 0;
        for (const auto& [cell, len] : cross[p]) cp += len * len / (2 * area);
        curvature[p] = cp;
        if (!(cp > 0)) throw std::invalid_argument("degenerate path");
    }

    std::vector<double> rho(grid.cells(), 0.0);
    std::vector<double> lambda(np, 0.0);

    auto path_integral = [&](std::size_t p) {
        double s = 0;
        for (const auto& [cell, len] : cross[p]) s += rho[cell] * len;
        return s;
    };
    auto sum_rho_sq = [&] {
        double s = 0;
        for (double v : rho) s += v * v;
        return s * area;
    };

    ModulusResult out;
    const int max_sweeps = std::max(1, opts.max_iterations / std::max<int>(1, (int)np));
    int sweeps = 0;
    double gap = std::numeric_limits<double>::infinity();
    double min_int = 0;
    for (sweeps = 1; sweeps <= max_sweeps; ++sweeps) {
        for (std::size_t p = 0; p < np; ++p) {
            const double grad = 1 - path_integral(p);
            double nl = lambda[p] + grad / curvature[p];
            if (nl < 0) nl = 0;
            const double dl = nl - lambda[p];
            if (dl == 0) continue;
            lambda[p] = nl;
            for (const auto& [cell, len] : cross[p]) rho[cell] += dl * len / (2 * area);
        }
        min_int = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < np; ++p) min_int = std::min(min_int, path_integral(p));
        const double ssq = sum_rho_sq();
        double dual = 0;
        for (double l : lambda) dual += l;
        dual -= ssq;
        if (min_int > 0) {
            const double primal = ssq / (min_int * min_int);
            gap = (primal - dual) / std::max(primal, 1e-300);
            if (gap <= opts.gap_tol && min_int >= 1 - opts.feasibility_tol) break;
        }
    }

    // final projection to a feasible density
    if (min_int > 0 && min_int < 1) {
        for (double& v : rho) v /= min_int;
    }
    double final_min = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < np; ++p) final_min = std::min(final_min, path_integral(p));

    out.density = Density{grid, std::move(rho)};
    out.value = out.density.integral_sq();
    out.iterations = sweeps * static_cast<int>(np);
    out.gap = gap;
    out.min_path_integral = final_min;
    out.converged = gap <= opts.gap_tol;
    (void)min_len;
    return out;
}

double admissibility_check(const Density& rho, const PathFamily& family) {
    const GridSpec& grid = rho.grid;
    if (family.region.kind != grid.region.kind) throw std::invalid_argument("grid mismatch");
    const auto geo_paths = family.paths_at(grid);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : geo_paths) {
        const PathCrossings c = rasterize_path(p, grid);
        double s = 0;
        for (const auto& [cell, len] : c.cells) s += rho.values[cell] * len;
        worst = std::min(worst, s);
    }
    return worst;
}

double extremal_density_deviation(const ModulusResult& result) {
    return result.density.l2_deviation_from(1.0);
}

// ---------------------------------------------------------------------------
// Hole densities
// ---------------------------------------------------------------------------

HolePairing HolePairing::identity(std::size_t hole_count) {
    HolePairing p;
    p.perm.resize(hole_count);
    for (std::size_t i = 0; i < hole_count; ++i) p.perm[i] = static_cast<int>(i);
    return p;
}

int HolePairing::preimage_of(int idx) const {
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] == idx) return static_cast<int>(i);
    throw std::invalid_argument("pairing: not a bijection");
}

bool HolePairing::is_bijection() const {
    std::vector<char> seen(perm.size(), 0);
    for (int t : perm) {
        if (t < 0 || t >= static_cast<int>(perm.size()) || seen[t]) return false;
        seen[t] = 1;
    }
    return true;
}

double HoleDensity::integral_sq() const {
    double s = 0;
    for (const auto& p : pieces) s += p.value * p.value * (p.x1 - p.x0) * (p.y1 - p.y0);
    return s;
}

double HoleDensity::value_at(double u, double v) const {
    for (const auto& p : pieces)
        if (u > p.x0 && u < p.x1 && v > p.y0 && v < p.y1) return p.value;
    return 0.0;
}

double HoleDensity::line_integral(int axis, double fixed_coord, double from, double to) const {
    double s = 0;
    for (const auto& p : pieces) {
        if (axis == 1) {  // integrate along v at u = fixed_coord
            if (fixed_coord <= p.x0 || fixed_coord >= p.x1) continue;
            s += p.value * std::max(0.0, std::min(to, p.y1) - std::max(from, p.y0));
        } else {  // along u at v = fixed_coord
            if (fixed_coord <= p.y0 || fixed_coord >= p.y1) continue;
            s += p.value * std::max(0.0, std::min(to, p.x1) - std::max(from, p.x0));
        }
    }
    return s;
}

Density HoleDensity::rasterize(const GridSpec& grid) const {
    const ChartRect c = grid.region.chart();
    Density d{grid, std::vector<double>(grid.cells(), 0.0)};
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double u = c.u0 + (ix + 0.5) * grid.du;
            const double v = c.v0 + (iy + 0.5) * grid.dv;
            d.values[grid.cell_index(ix, iy)] = value_at(u, v);
        }
    }
    return d;
}

namespace {

struct HoleRect {
    double x0, x1, y0, y1;
    double extent(int axis) const { return axis == 1 ? y1 - y0 : x1 - x0; }
};

std::vector<HoleRect> unified_holes(const Carpet& S) {
    if (!S.has_k()) throw std::invalid_argument("hole density: carpet has no distinguished K");
    std::vector<HoleRect> H;
    H.push_back({S.region.ks, S.region.ks + S.region.kw, S.region.kt, S.region.kt + S.region.kh});
    for (const auto& h : S.holes) H.push_back({h.x0(), h.x1(), h.y0(), h.y1()});
    return H;
}

/// axis = 1: family paths run along v (case 1, vertical / radial);
/// axis = 0: along u (case 2, horizontal / circular).
HoleDensity hole_density_core(const Carpet& S, const HolePairing& pairing, int axis) {
    const auto H = unified_holes(S);
    if (pairing.perm.size() != H.size())
        throw std::invalid_argument("pairing: size does not match the hole set");
    if (!pairing.is_bijection()) throw std::invalid_argument("pairing: not a bijection");

    const double k_extent = H[0].extent(axis);
    HoleDensity d;
    d.case_id = axis == 1 ? 1 : 2;
    for (std::size_t i = 0; i < H.size(); ++i) {
        HoleDensity::Piece p{H[i].x0, H[i].x1, H[i].y0, H[i].y1, 0.0};
        if (i == 0) {
            p.value = H[pairing.image_of(0)].extent(axis) / k_extent;
        } else if (pairing.image_of(static_cast<int>(i)) == 0) {
            p.value = k_extent / H[i].extent(axis);
        } else {
            p.value = H[pairing.image_of(static_cast<int>(i))].extent(axis) / H[i].extent(axis);
        }
        d.pieces.push_back(p);
    }
    return d;
}

RigidityBoundReport bound_check_core(const Carpet& S, const HolePairing& pairing, int grid_n) {
    // w and h in the theorem's sense: for rectangle rings the horizontal and
    // vertical sides of K; on the log cylinder, w is the circular and h the
    // radial side length
    const bool log_kind = S.region.kind == RegionKind::log_cylinder;
    const double w = log_kind ? S.region.kh : S.region.kw;
    const double h = log_kind ? S.region.kw : S.region.kh;
    if (std::abs(w - h) < 1e-12)
        throw std::invalid_argument("square hole: use the square-case theorem");
    const bool case1 = w > h;
    // paths run along the thin side of K: vertical (radial) in case 1,
    // horizontal (circular) in case 2
    const int axis = case1 == !log_kind ? 1 : 0;

    HoleDensity rho = hole_density_core(S, pairing, axis);
    rho.case_id = case1 ? 1 : 2;
    const auto H = unified_holes(S);

    RigidityBoundReport rep;
    rep.case_id = rho.case_id;
    rep.k_side = std::min(w, h);
    rep.image_side = H[pairing.image_of(0)].extent(axis);
    rep.implied_ok = rep.k_side <= rep.image_side + 1e-12;

    const ChartRect c = S.region.chart();
    const double path_len = axis == 1 ? c.dv() : c.du();
    const double cross_len = axis == 1 ? c.du() : c.dv();
    const int n_paths = grid_n;

    rep.min_integral = std::numeric_limits<double>::infinity();
    rep.max_linear_gap = 0;
    for (int i = 0; i < n_paths; ++i) {
        const double fixed = (axis == 1 ? c.u0 : c.v0) + (i + 0.5) * cross_len / n_paths;
        const double from = axis == 1 ? c.v0 : c.u0;
        const double to = from + path_len;
        const double integral = rho.line_integral(axis, fixed, from, to) / path_len;
        // covered length along this path (value-independent)
        double covered = 0;
        for (const auto& piece : rho.pieces) {
            if (axis == 1) {
                if (fixed > piece.x0 && fixed < piece.x1) covered += piece.y1 - piece.y0;
            } else {
                if (fixed > piece.y0 && fixed < piece.y1) covered += piece.x1 - piece.x0;
            }
        }
        rep.min_integral = std::min(rep.min_integral, integral);
        rep.max_linear_gap = std::max(rep.max_linear_gap, 1 - covered / path_len);
    }
    rep.admissible = rep.min_integral >= 1 - rep.max_linear_gap - 1e-9;

    rep.integral_rho_sq = rho.integral_sq();
    rep.area_defect = carpet_area(S);
    const double total = S.region.area();
    rep.lower_bound_raw_ok = total <= rep.integral_rho_sq + 1e-9 * total;
    rep.lower_bound_ok = total <= rep.integral_rho_sq + rep.area_defect + 1e-9 * total;
    return rep;
}

} // namespace

HoleDensity hole_density_case1(const Carpet& S, const HolePairing& pairing) {
    if (!(S.region.kw > S.region.kh))
        throw std::invalid_argument("hole density case 1 requires w > h");
    return hole_density_core(S, pairing, 1);
}

HoleDensity hole_density_case2(const Carpet& S, const HolePairing& pairing) {
    if (!(S.region.kw < S.region.kh))
        throw std::invalid_argument("hole density case 2 requires w < h");
    return hole_density_core(S, pairing, 0);
}

RigidityBoundReport rigidity_bound_check(const Carpet& S, const HolePairing& pairing, int grid_n) {
    if (S.region.kind != RegionKind::rect_ring)
        throw std::invalid_argument("rigidity bound: rectangle-ring carpet required");
    return bound_check_core(S, pairing, grid_n);
}

RigidityBoundReport cstar_rigidity_bound_check(const Carpet& S, const HolePairing& pairing,
                                               int grid_n) {
    if (S.region.kind != RegionKind::log_cylinder)
        throw std::invalid_argument("rigidity bound: C* carpet required");
    return bound_check_core(S, pairing, grid_n);
}

// ---------------------------------------------------------------------------
// Log transform
// ---------------------------------------------------------------------------

PointC cstar_log_transform(PointC z) {
    const double rr = z.norm();
    if (!(rr > 0)) throw std::domain_error("out of domain: log transform at 0");
    return {std::log(rr), wrap_angle(std::atan2(z.y, z.x))};
}

std::vector<PointC> cstar_log_transform(const std::vector<PointC>& path) {
    std::vector<PointC> out;
    out.reserve(path.size());
    for (const auto& z : path) {
        PointC w = cstar_log_transform(z);
        if (!out.empty()) {
            while (w.y - out.back().y > std::numbers::pi) w.y -= kTau;
            while (w.y - out.back().y < -std::numbers::pi) w.y += kTau;
        }
        out.push_back(w);
    }
    return out;
}

Region cstar_log_transform_region(double r) {
    if (!(r > 1)) throw std::invalid_argument("out of domain: cylinder requires r > 1");
    return Region::log_cylinder(std::log(r));
}

ClosedCurve cstar_log_transform(const ClosedCurve& curve) {
    return ClosedCurve(cstar_log_transform(curve.vertices));
}

double cstar_radial_length(double a, double b) {
    if (!(a > 0 && b > a)) throw std::invalid_argument("out of domain: need 0 < a < b");
    return std::log(b / a);
}

} // namespace qcarpet
