#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qcarpet/circle_map.hpp"
#include "qcarpet/plane_map.hpp"
#include "qcarpet/point.hpp"

namespace qcarpet {

/// A distortion probe: base point x with comparison points a, b; the ratio
/// t = d(x,a)/d(x,b) is the quasisymmetry parameter.
struct TripleSample {
    PointC x, a, b;
    double ratio() const;
};

/// Deterministic triples on the unit circle: all adjacent-sample triples of
/// `angles` plus a low-discrepancy batch of `extra` random-free triples.
std::vector<TripleSample> circle_triples(const std::vector<double>& angles, std::size_t extra);

/// Lower estimate of the weak quasisymmetry constant H: max over samples of
/// d(fx,fa)/d(fx,fb). Requires d(x,a) <= d(x,b) per sample; throws
/// "non-injective sample" when f(x) = f(b).
double weak_qs_constant(const std::function<PointC(PointC)>& f,
                        const std::vector<TripleSample>& samples);
double weak_qs_constant(const CircleMap& f, const std::vector<TripleSample>& samples);

/// Empirical quasisymmetry gauge: for each t in t_grid, the max image ratio
/// over triples with d(x,a) <= t d(x,b). Buckets with no triples are omitted;
/// the profile is nondecreasing by construction.
std::vector<std::pair<double, double>> qs_eta_profile(const std::function<PointC(PointC)>& f,
                                                      const std::vector<double>& t_grid,
                                                      const std::vector<TripleSample>& samples);

/// Default quasisymmetry buckets {1/8, 1/4, 1/2, 1, 2, 4, 8}.
std::vector<double> default_eta_buckets();

} // namespace qcarpet
