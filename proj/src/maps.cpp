#include "qcarpet/maps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcarpet/util.hpp"

namespace qcarpet {

double TripleSample::ratio() const {
    const double db = dist(x, b);
    if (!(db > 0)) throw std::invalid_argument("triple sample: b == x");
    return dist(x, a) / db;
}

std::vector<TripleSample> circle_triples(const std::vector<double>& angles, std::size_t extra) {
    std::vector<TripleSample> out;
    const std::size_t n = angles.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PointC x = circle_point(angles[i]);
        const PointC a = circle_point(angles[(i + n - 1) % n]);
        const PointC b = circle_point(angles[(i + 1) % n]);
        // order so d(x,a) <= d(x,b)
        if (dist(x, a) <= dist(x, b)) out.push_back({x, a, b});
        else out.push_back({x, b, a});
    }
    for (std::size_t i = 0; i < extra; ++i) {
        const PointC q = kronecker2(i);
        const double u3 = kronecker1(i);
        const PointC x = circle_point(kTau * q.x);
        const PointC a = circle_point(kTau * q.y);
        const PointC b = circle_point(kTau * u3);
        if (dist(x, b) < 1e-12 || dist(x, a) < 1e-15) continue;
        if (dist(x, a) <= dist(x, b)) out.push_back({x, a, b});
        else out.push_back({x, b, a});
    }
    return out;
}

double weak_qs_constant(const std::function<PointC(PointC)>& f,
                        const std::vector<TripleSample>& samples) {
    double h = 1.0;
    for (const auto& s : samples) {
        if (!(dist(s.x, s.a) <= dist(s.x, s.b) * (1 + 1e-12)))
            throw std::invalid_argument("triple sample: requires d(x,a) <= d(x,b)");
        const PointC fx = f(s.x), fa = f(s.a), fb = f(s.b);
        const double den = dist(fx, fb);
        if (!(den > 0)) throw std::invalid_argument("non-injective sample");
        h = std::max(h, dist(fx, fa) / den);
    }
    return h;
}

double weak_qs_constant(const CircleMap& f, const std::vector<TripleSample>& samples) {
    return weak_qs_constant([&](PointC p) { return f.eval_point(p); }, samples);
}

std::vector<std::pair<double, double>> qs_eta_profile(const std::function<PointC(PointC)>& f,
                                                      const std::vector<double>& t_grid,
                                                      const std::vector<TripleSample>& samples) {
    std::vector<std::pair<double, double>> out;
    for (double t : t_grid) {
        double eta = 0.0;
        bool any = false;
        for (const auto& s : samples) {
            const double db = dist(s.x, s.b);
            if (!(db > 0)) continue;
            if (dist(s.x, s.a) > t * db) continue;
            const PointC fx = f(s.x), fa = f(s.a), fb = f(s.b);
            const double den = dist(fx, fb);
            if (!(den > 0)) throw std::invalid_argument("non-injective sample");
            eta = std::max(eta, dist(fx, fa) / den);
            any = true;
        }
        if (any) out.emplace_back(t, eta);
    }
    return out;
}

std::vector<double> default_eta_buckets() { return {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}; }

} // namespace qcarpet
