#include "qcarpet/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace qcarpet {

namespace {

// interpolate on a strictly monotone table (xs increasing)
double table_eval(const std::vector<double>& xs, const std::vector<double>& ys, double period_x,
                  double period_y, double x) {
    const double base = xs.front();
    const double m = std::floor((x - base) / period_x);
    const double xr = x - m * period_x;  // in [base, base + period)
    // upper_bound over xs extended by xs[0] + period
    std::size_t lo = std::upper_bound(xs.begin(), xs.end(), xr) - xs.begin();
    double x0, x1, y0, y1;
    if (lo == 0) {  // xr == base exactly
        return ys.front() + m * period_y;
    }
    if (lo == xs.size()) {
        x0 = xs.back();
        x1 = xs.front() + period_x;
        y0 = ys.back();
        y1 = ys.front() + period_y;
    } else {
        x0 = xs[lo - 1];
        x1 = xs[lo];
        y0 = ys[lo - 1];
        y1 = ys[lo];
    }
    const double t = (xr - x0) / (x1 - x0);
    return y0 + t * (y1 - y0) + m * period_y;
}

} // namespace

void CircleMap::validate() const {
    if (xs_.size() != ys_.size() || xs_.size() < 3)
        throw std::invalid_argument("circle map: bad sample arrays");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (!(xs_[i + 1] > xs_[i])) throw std::invalid_argument("circle map: angles not increasing");
        if (preserve_ ? !(ys_[i + 1] > ys_[i]) : !(ys_[i + 1] < ys_[i]))
            throw std::invalid_argument("non-injective");
    }
    if (!(xs_.back() - xs_.front() < kTau))
        throw std::invalid_argument("circle map: angle span exceeds one turn");
    if (!(std::abs(ys_.back() - ys_.front()) < kTau)) throw std::invalid_argument("non-injective");
}

CircleMap::CircleMap(const std::vector<double>& angles, const std::vector<double>& images) {
    if (angles.size() != images.size()) throw std::invalid_argument("circle map: length mismatch");
    if (angles.size() < 8) throw std::invalid_argument("circle map: need at least 8 samples");
    for (double a : angles)
        if (!(a >= 0 && a < kTau)) throw std::invalid_argument("circle map: angle outside [0, 2pi)");
    preserve_ = qcarpet::orientation_preserving(angles, images);
    xs_ = angles;
    ys_.resize(images.size());
    ys_[0] = images[0];
    for (std::size_t i = 0; i + 1 < images.size(); ++i) {
        const double d = preserve_ ? cyclic_delta(images[i], images[i + 1])
                                   : cyclic_delta(images[i + 1], images[i]);
        if (!(d > 0)) throw std::invalid_argument("non-injective");
        ys_[i + 1] = preserve_ ? ys_[i] + d : ys_[i] - d;
    }
    validate();
}

CircleMap::CircleMap() : CircleMap(rotation(0.0, 16)) {}

CircleMap CircleMap::identity(std::size_t n) { return rotation(0.0, n); }

CircleMap CircleMap::rotation(double phi, std::size_t n) {
    CircleMap m{raw_tag{}};
    m.preserve_ = true;
    m.xs_.resize(n);
    m.ys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.xs_[i] = kTau * static_cast<double>(i) / static_cast<double>(n);
        m.ys_[i] = m.xs_[i] + phi;
    }
    m.validate();
    return m;
}

CircleMap CircleMap::from_lift(const std::function<double(double)>& lift, std::size_t n) {
    CircleMap m{raw_tag{}};
    m.preserve_ = true;
    m.xs_.resize(n);
    m.ys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.xs_[i] = kTau * static_cast<double>(i) / static_cast<double>(n);
        m.ys_[i] = lift(m.xs_[i]);
    }
    m.validate();
    return m;
}

double CircleMap::eval_lift(double x) const {
    return table_eval(xs_, ys_, kTau, preserve_ ? kTau : -kTau, x);
}

PointC CircleMap::eval_point(PointC p) const {
    const double theta = std::atan2(p.y, p.x);
    return circle_point(eval_lift(theta));
}

double CircleMap::inverse_lift(double y) const {
    if (!preserve_) {
        std::vector<double> ny(ys_.rbegin(), ys_.rend());
        std::vector<double> nx(xs_.rbegin(), xs_.rend());
        return table_eval(ny, nx, kTau, -kTau, y);
    }
    return table_eval(ys_, xs_, kTau, kTau, y);
}

CircleMap CircleMap::inverse() const {
    CircleMap m{raw_tag{}};
    if (preserve_) {
        m.preserve_ = true;
        m.xs_ = ys_;
        m.ys_ = xs_;
    } else {
        m.preserve_ = false;
        m.xs_.assign(ys_.rbegin(), ys_.rend());
        m.ys_.assign(xs_.rbegin(), xs_.rend());
    }
    m.validate();
    return m;
}

CircleMap compose(const CircleMap& f, const CircleMap& g) {
    // breakpoints: g's own plus g^{-1}(f's), pulled into g's base window
    std::vector<double> xs = g.xs_;
    const double lo = g.xs_.front();
    for (double a : f.xs_) {
        double x = g.inverse_lift(a);
        x -= kTau * std::floor((x - lo) / kTau);
        xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> ux;
    ux.reserve(xs.size());
    for (double x : xs) {
        if (ux.empty() || x - ux.back() > 1e-13) ux.push_back(x);
    }
    if (ux.size() > 1 && (ux.front() + kTau) - ux.back() <= 1e-13) ux.pop_back();

    CircleMap m{CircleMap::raw_tag{}};
    m.preserve_ = (f.preserve_ == g.preserve_);
    m.xs_ = std::move(ux);
    m.ys_.resize(m.xs_.size());
    for (std::size_t i = 0; i < m.xs_.size(); ++i) m.ys_[i] = f.eval_lift(g.eval_lift(m.xs_[i]));
    // rounding can flatten nearly-equal knots; drop offenders
    std::vector<double> cx, cy;
    cx.reserve(m.xs_.size());
    cy.reserve(m.xs_.size());
    for (std::size_t i = 0; i < m.xs_.size(); ++i) {
        if (!cy.empty()) {
            const bool ok = m.preserve_ ? (m.ys_[i] > cy.back()) : (m.ys_[i] < cy.back());
            if (!ok) continue;
        }
        cx.push_back(m.xs_[i]);
        cy.push_back(m.ys_[i]);
    }
    m.xs_ = std::move(cx);
    m.ys_ = std::move(cy);
    m.validate();
    return m;
}

CircleMap CircleMap::iterate(int n) const {
    if (n == 0) return identity(xs_.size());
    CircleMap base = (n > 0) ? *this : inverse();
    int k = std::abs(n);
    if (k == 1) return base;
    CircleMap acc = base;
    for (int i = 1; i < k; ++i) acc = compose(base, acc);
    return acc;
}

std::vector<double> CircleMap::sample_angles() const {
    std::vector<double> out(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) out[i] = wrap_angle(xs_[i]);
    return out;
}

std::vector<double> CircleMap::sample_images() const {
    std::vector<double> out(ys_.size());
    for (std::size_t i = 0; i < ys_.size(); ++i) out[i] = wrap_angle(ys_[i]);
    return out;
}

double CircleMap::periodicity_residual(int k) const {
    const CircleMap fk = iterate(k);
    double res = 0.0;
    const double turns = std::round((fk.ys_.front() - fk.xs_.front()) / kTau) * kTau;
    for (std::size_t i = 0; i < fk.xs_.size(); ++i)
        res = std::max(res, std::abs(fk.ys_[i] - fk.xs_[i] - turns));
    return res;
}

std::optional<double> CircleMap::fixed_point(double tol) const {
    // On each linear segment of the lift solve phi(x) = x + 2pi m.
    const double turns = std::round((ys_.front() - xs_.front()) / kTau) * kTau;
    std::optional<double> best;
    double best_err = tol;
    auto consider = [&](double x) {
        const double err = std::abs(eval_lift(x) - x - turns);
        if (err <= best_err) {
            best_err = err;
            best = wrap_angle(x);
        }
    };
    const std::size_t n = xs_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = xs_[i];
        const double x1 = (i + 1 < n) ? xs_[i + 1] : xs_.front() + kTau;
        const double y0 = ys_[i] - turns;
        const double y1 = ((i + 1 < n) ? ys_[i + 1] : ys_.front() + (preserve_ ? kTau : -kTau)) - turns;
        const double g0 = y0 - x0, g1 = y1 - x1;
        consider(x0);
        if ((g0 <= 0 && g1 >= 0) || (g0 >= 0 && g1 <= 0)) {
            const double t = (std::abs(g1 - g0) < 1e-300) ? 0.0 : g0 / (g0 - g1);
            consider(x0 + t * (x1 - x0));
        }
    }
    return best;
}

bool orientation_preserving(const std::vector<double>& angles, const std::vector<double>& images) {
    if (angles.size() < 3 || angles.size() != images.size())
        throw std::invalid_argument("circle map: need at least 3 samples");
    // duplicate image angles are not a homeomorphism
    std::vector<double> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (!(sorted[i + 1] > sorted[i])) throw std::invalid_argument("non-injective");

    // a cyclically increasing sequence in [0,2pi) has exactly one descent;
    // a cyclically decreasing one exactly one ascent
    std::size_t descents = 0, ascents = 0;
    const std::size_t n = images.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = images[(i + 1) % n] - images[i];
        if (d < 0) ++descents;
        else ++ascents;
    }
    if (descents <= 1) return true;
    if (ascents <= 1) return false;
    throw std::invalid_argument("non-injective: images not cyclically monotone");
}

PeriodicityCheck is_periodic(const CircleMap& f, int k, double tol) {
    if (k < 1) throw std::invalid_argument("is_periodic: k must be >= 1");
    PeriodicityCheck out;
    out.residual = f.periodicity_residual(k);
    out.periodic = out.residual <= tol;
    return out;
}

} // namespace qcarpet
