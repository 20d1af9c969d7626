#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/extension.hpp"
#include "qcarpet/util.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// Hole orbits
// ---------------------------------------------------------------------------

namespace {

std::vector<int> invert_permutation(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size(), -1);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const int t = perm[i];
        if (t < 0 || t >= static_cast<int>(perm.size()) || inv[t] != -1)
            throw std::invalid_argument("orbit matching failed: not a permutation of the holes");
        inv[t] = static_cast<int>(i);
    }
    return inv;
}

// Euclidean distance from p to the boundary of an axis square
double square_boundary_distance(const Hole& h, PointC p) {
    const double dx = std::max({h.x0() - p.x, p.x - h.x1(), 0.0});
    const double dy = std::max({h.y0() - p.y, p.y - h.y1(), 0.0});
    if (dx > 0 || dy > 0) return std::hypot(dx, dy);
    // inside: distance to the nearest side
    return std::min({p.x - h.x0(), h.x1() - p.x, p.y - h.y0(), h.y1() - p.y});
}

} // namespace

const Orbit& OrbitDecomposition::orbit_of(int hole) const {
    for (const auto& o : orbits)
        for (int m : o.members)
            if (m == hole) return o;
    throw std::out_of_range("orbit: unknown hole");
}

int OrbitDecomposition::position_in_orbit(int hole) const {
    const Orbit& o = orbit_of(hole);
    for (std::size_t p = 0; p < o.members.size(); ++p)
        if (o.members[p] == hole) return static_cast<int>(p);
    throw std::out_of_range("orbit: unknown hole");
}

OrbitDecomposition hole_orbits(const Carpet& S, const std::vector<int>& perm, int k) {
    if (perm.size() != S.holes.size())
        throw std::invalid_argument("orbit matching failed: permutation size mismatch");
    OrbitDecomposition out;
    out.perm = perm;
    out.inv_perm = invert_permutation(perm);
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        Orbit o;
        o.rep = static_cast<int>(i);
        int cur = static_cast<int>(i);
        do {
            seen[cur] = 1;
            o.members.push_back(cur);
            cur = perm[cur];
        } while (cur != static_cast<int>(i));
        o.period = static_cast<int>(o.members.size());
        if (k % o.period != 0)
            throw std::invalid_argument("orbit matching failed: orbit period does not divide k");
        out.orbits.push_back(std::move(o));
    }
    return out;
}

OrbitDecomposition hole_orbits(const Carpet& S, const PlaneFn& f, int k) {
    const double threshold = S.min_gap() / 2;
    std::vector<int> perm(S.holes.size(), -1);
    for (std::size_t i = 0; i < S.holes.size(); ++i) {
        const Hole& h = S.holes[i];
        // push boundary samples through f
        std::vector<PointC> img;
        const int per_edge = 16;
        for (int e = 0; e < 4; ++e) {
            for (int s = 0; s < per_edge; ++s) {
                const double t = static_cast<double>(s) / per_edge;
                PointC p;
                switch (e) {
                    case 0: p = {h.x0() + t * h.side, h.y0()}; break;
                    case 1: p = {h.x1(), h.y0() + t * h.side}; break;
                    case 2: p = {h.x1() - t * h.side, h.y1()}; break;
                    default: p = {h.x0(), h.y1() - t * h.side}; break;
                }
                img.push_back(f(p));
            }
        }
        int best = -1;
        for (std::size_t c = 0; c < S.holes.size(); ++c) {
            double worst = 0.0;
            for (const auto& q : img) worst = std::max(worst, square_boundary_distance(S.holes[c], q));
            if (worst <= threshold) {
                if (best != -1) throw std::invalid_argument("orbit matching failed: ambiguous match");
                best = static_cast<int>(c);
            }
        }
        if (best == -1) throw std::invalid_argument("orbit matching failed: no hole within threshold");
        perm[i] = best;
    }
    return hole_orbits(S, perm, k);
}

// ---------------------------------------------------------------------------
// CarpetBoundaryData
// ---------------------------------------------------------------------------

double CarpetBoundaryData::periodicity_residual(const Carpet& S) const {
    if (perm.size() != S.holes.size() || hole_maps.size() != S.holes.size())
        throw std::invalid_argument("carpet extension: boundary data size mismatch");
    const OrbitDecomposition orbits = hole_orbits(S, perm, k);
    double worst = outer.periodicity_residual(k);
    for (const auto& o : orbits.orbits) {
        CircleMap c = hole_maps[o.members[0]];
        for (std::size_t s = 1; s < o.members.size(); ++s)
            c = compose(hole_maps[o.members[s]], c);
        worst = std::max(worst, c.periodicity_residual(k / o.period));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// CarpetSurgeryMap
// ---------------------------------------------------------------------------

CarpetSurgeryMap::CarpetSurgeryMap(const Carpet& S, const CarpetBoundaryData& data, int grid)
    : S_(S), data_(data), grid_(grid) {
    if (S_.region.kind != RegionKind::rect)
        throw std::invalid_argument("carpet extension: rectangle carpets only");
    if (data_.k < 1) throw std::invalid_argument("carpet extension: k must be >= 1");
    if (data_.perm.size() != S_.holes.size() || data_.hole_maps.size() != S_.holes.size())
        throw std::invalid_argument("carpet extension: boundary data size mismatch");
    if (data_.periodicity_residual(S_) > 1e-6)
        throw std::invalid_argument("carpet extension: boundary data is not k-periodic");
    orbits_ = hole_orbits(S_, data_.perm, data_.k);

    outer_chart_ = RectDiskChart(0, 0, S_.region.a, 1);
    const double ymax = 6.0;
    outer_ext_ = std::make_shared<BaHalfPlaneMap>(data_.outer, grid_, grid_, ymax);
    for (std::size_t i = 0; i < S_.holes.size(); ++i) {
        const Hole& h = S_.holes[i];
        hole_charts_.emplace_back(PointC{h.cx, h.cy}, h.side);
        hole_ext_.push_back(std::make_shared<BaHalfPlaneMap>(data_.hole_maps[i], grid_, grid_, ymax));
    }

    // collars: half the gap to the nearest other hole closure or the boundary
    for (std::size_t i = 0; i < S_.holes.size(); ++i) {
        const Hole& h = S_.holes[i];
        double gap = std::min({h.x0(), S_.region.a - h.x1(), h.y0(), 1.0 - h.y1()});
        for (std::size_t j = 0; j < S_.holes.size(); ++j) {
            if (j == i) continue;
            const Hole& o = S_.holes[j];
            const double gx = std::max({h.x0() - o.x1(), o.x0() - h.x1(), 0.0});
            const double gy = std::max({h.y0() - o.y1(), o.y0() - h.y1(), 0.0});
            gap = std::min(gap, std::max(gx, gy));
        }
        collar_half_.push_back(h.side / 2 + gap / 4);
    }

    // per-orbit periodic disk extensions g_j of the orbit composite
    for (const auto& o : orbits_.orbits) {
        CircleMap c = data_.hole_maps[o.members[0]];
        for (std::size_t s = 1; s < o.members.size(); ++s)
            c = compose(data_.hole_maps[o.members[s]], c);
        const int kk = data_.k / o.period;
        if (kk == 1) {
            auto cm = std::make_shared<CircleMap>(std::move(c));
            rep_annuli_.push_back(nullptr);
            rep_towers_.push_back(nullptr);
            rep_g_.push_back([cm](PointC z) {
                const double rr = z.norm();
                if (!(rr > 0)) return PointC{0, 0};
                return circle_point(cm->eval_lift(std::atan2(z.y, z.x)), rr);
            });
        } else {
            auto ann = std::make_shared<AnnulusPeriodicMap>(c, 0.5, kk, grid_);
            auto tow = std::make_shared<ReflectionTower>(
                reflection_tower_extend(ann->fn(), 0.5, default_tower_depth(0.5, 1.0 / grid_)));
            rep_annuli_.push_back(ann);
            rep_towers_.push_back(tow);
            rep_g_.push_back(tow->fn());
        }
    }

    // initial-extension sanity on the collars
    for (std::size_t i = 0; i < S_.holes.size(); ++i) {
        for (int s = 0; s < 8; ++s) {
            const double a = kTau * s / 8;
            const double reach = (S_.holes[i].side / 2 + collar_half_[i]) / 2;
            const PointC z{S_.holes[i].cx + reach * std::cos(a), S_.holes[i].cy + reach * std::sin(a)};
            if (hole_containing(z) >= 0) continue;
            const PointC w = eval_initial(z);
            const Hole& img = S_.holes[data_.perm[i]];
            const Hole shrunk{img.cx, img.cy, img.side * 0.999};
            if (shrunk.contains(w)) throw std::invalid_argument("invalid initial extension");
        }
    }
}

int CarpetSurgeryMap::hole_containing(PointC z) const {
    for (std::size_t i = 0; i < S_.holes.size(); ++i) {
        const Hole& h = S_.holes[i];
        if (z.x >= h.x0() && z.x <= h.x1() && z.y >= h.y0() && z.y <= h.y1())
            return static_cast<int>(i);
    }
    return -1;
}

PointC CarpetSurgeryMap::apply_hole_map(int i, PointC z) const {
    return hole_charts_[data_.perm[i]].from_disk(hole_ext_[i]->eval_disk(hole_charts_[i].to_disk(z)));
}

PointC CarpetSurgeryMap::apply_hole_map_inv(int i, PointC z) const {
    return hole_charts_[i].from_disk(
        hole_ext_[i]->inverse_disk(hole_charts_[data_.perm[i]].to_disk(z)));
}

PointC CarpetSurgeryMap::apply_g(int orbit_index, PointC z) const {
    const int rep = orbits_.orbits[orbit_index].rep;
    return hole_charts_[rep].from_disk(rep_g_[orbit_index](hole_charts_[rep].to_disk(z)));
}

PointC CarpetSurgeryMap::boundary_value(int hole, PointC z) const {
    const PointC w = hole_charts_[hole].to_disk(z);
    const double xi = std::atan2(w.y, w.x);
    return hole_charts_[data_.perm[hole]].from_disk(
        circle_point(data_.hole_maps[hole].eval_lift(xi)));
}

PointC CarpetSurgeryMap::outer_boundary_value(PointC z) const {
    const PointC w = outer_chart_.to_disk(z);
    const double xi = std::atan2(w.y, w.x);
    return outer_chart_.from_disk(circle_point(data_.outer.eval_lift(xi)));
}

PointC CarpetSurgeryMap::eval_initial(PointC z) const {
    const int i = hole_containing(z);
    if (i >= 0) return apply_hole_map(i, z);
    auto G = [&](PointC p) {
        return outer_chart_.from_disk(outer_ext_->eval_disk(outer_chart_.to_disk(p)));
    };
    // collar blend: displacement interpolation between the hole extension on
    // the projected boundary point and the outer extension
    for (std::size_t c = 0; c < S_.holes.size(); ++c) {
        const Hole& h = S_.holes[c];
        const double ln = std::max(std::abs(z.x - h.cx), std::abs(z.y - h.cy));
        if (ln >= collar_half_[c] || ln <= h.side / 2) continue;
        const double tau = (ln - h.side / 2) / (collar_half_[c] - h.side / 2);
        const PointC proj{h.cx + (z.x - h.cx) * (h.side / 2) / ln,
                          h.cy + (z.y - h.cy) * (h.side / 2) / ln};
        const PointC dh = apply_hole_map(static_cast<int>(c), proj) - proj;
        const PointC dg = G(z) - z;
        return z + dh * (1 - tau) + dg * tau;
    }
    return G(z);
}

PointC CarpetSurgeryMap::eval(PointC z) const {
    const int i = hole_containing(z);
    if (i < 0) return eval_initial(z);
    int oi = 0;
    for (std::size_t c = 0; c < orbits_.orbits.size(); ++c) {
        for (int m : orbits_.orbits[c].members)
            if (m == i) oi = static_cast<int>(c);
    }
    const Orbit& o = orbits_.orbits[oi];
    const int pos = orbits_.position_in_orbit(i);
    if (pos <= o.period - 2) return apply_hole_map(i, z);
    // last orbit piece: walk back to the representative, then apply g_j
    PointC w = z;
    int cur = i;
    for (int s = 0; s < o.period - 1; ++s) {
        const int prev = orbits_.inv_perm[cur];
        w = apply_hole_map_inv(prev, w);
        cur = prev;
    }
    return apply_g(oi, w);
}

std::vector<PointC> CarpetSurgeryMap::carpet_probes(std::size_t per_hole) const {
    std::vector<PointC> out;
    // peripheral samples (outer boundary and hole boundaries)
    for (std::size_t s = 0; s < per_hole; ++s) {
        const double xi = kTau * (static_cast<double>(s) + 0.37) / per_hole;
        out.push_back(outer_chart_.from_disk(circle_point(xi)));
    }
    for (const auto& h : S_.holes) {
        const SquareDiskChart chart({h.cx, h.cy}, h.side);
        for (std::size_t s = 0; s < per_hole; ++s) {
            const double xi = kTau * (static_cast<double>(s) + 0.37) / per_hole;
            out.push_back(chart.from_disk(circle_point(xi)));
        }
        // hole closure interior
        const int g = 4;
        for (int a = 0; a <= g; ++a)
            for (int b = 0; b <= g; ++b)
                out.push_back({h.cx + h.side * 0.42 * (2.0 * a / g - 1),
                               h.cy + h.side * 0.42 * (2.0 * b / g - 1)});
    }
    return out;
}

double CarpetSurgeryMap::periodicity_residual(std::size_t per_hole) const {
    const auto probes = carpet_probes(per_hole);
    double worst = 0.0;
    for (const auto& p : probes) {
        PointC z = p;
        for (int i = 0; i < data_.k; ++i) z = eval(z);
        worst = std::max(worst, dist(z, p));
    }
    return worst;
}

double CarpetSurgeryMap::boundary_agreement(std::size_t per_circle) const {
    double worst = 0.0;
    for (std::size_t s = 0; s < per_circle; ++s) {
        const double xi = kTau * (static_cast<double>(s) + 0.11) / per_circle;
        const PointC z = outer_chart_.from_disk(circle_point(xi));
        worst = std::max(worst, dist(eval(z), outer_boundary_value(z)));
    }
    for (std::size_t i = 0; i < S_.holes.size(); ++i) {
        const Hole& h = S_.holes[i];
        const SquareDiskChart chart({h.cx, h.cy}, h.side);
        for (std::size_t s = 0; s < per_circle; ++s) {
            const double xi = kTau * (static_cast<double>(s) + 0.11) / per_circle;
            const PointC z = chart.from_disk(circle_point(xi));
            worst = std::max(worst, dist(eval(z), boundary_value(static_cast<int>(i), z)));
        }
    }
    return worst;
}

double CarpetSurgeryMap::orbit_return_residual(std::size_t per_hole) const {
    double worst = 0.0;
    for (std::size_t oi = 0; oi < orbits_.orbits.size(); ++oi) {
        const Orbit& o = orbits_.orbits[oi];
        const Hole& h = S_.holes[o.rep];
        std::vector<PointC> probes;
        const SquareDiskChart chart({h.cx, h.cy}, h.side);
        for (std::size_t s = 0; s < per_hole; ++s) {
            const double xi = kTau * (static_cast<double>(s) + 0.29) / per_hole;
            probes.push_back(chart.from_disk(circle_point(xi)));
            probes.push_back({h.cx + h.side * 0.3 * std::cos(xi), h.cy + h.side * 0.3 * std::sin(xi)});
        }
        for (const auto& p : probes) {
            PointC z = p;
            for (int s = 0; s < o.period; ++s) z = eval(z);
            worst = std::max(worst, dist(z, apply_g(static_cast<int>(oi), p)));
        }
    }
    return worst;
}

CarpetSurgeryMap carpet_periodic_extension(const Carpet& S, const CarpetBoundaryData& data,
                                           int grid) {
    return CarpetSurgeryMap(S, data, grid);
}

} // namespace qcarpet
