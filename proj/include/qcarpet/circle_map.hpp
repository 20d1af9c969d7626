#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcarpet/point.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// CircleMap
//
// A sampled circle homeomorphism kept as an exact piecewise-linear lift
// phi: R -> R with phi(x + 2pi) = phi(x) +/- 2pi. Composition, inversion and
// iteration act on lifts and stay piecewise linear, so identities like
// f^k = id for conjugated rotations hold to rounding error rather than to
// interpolation error.
// ---------------------------------------------------------------------------

class CircleMap {
public:
    /// Default-constructs the identity (16 samples).
    CircleMap();

    /// angles: strictly increasing in [0, 2pi); images: in [0, 2pi),
    /// cyclically strictly monotone. Throws "non-injective" on duplicate
    /// images and rejects fewer than 8 samples.
    CircleMap(const std::vector<double>& angles, const std::vector<double>& images);

    static CircleMap identity(std::size_t n = 16);
    static CircleMap rotation(double phi, std::size_t n = 16);
    /// Samples an orientation-preserving lift x -> lift(x) (must satisfy
    /// lift(x + 2pi) = lift(x) + 2pi) at n uniform angles.
    static CircleMap from_lift(const std::function<double(double)>& lift, std::size_t n);

    bool orientation_preserving() const { return preserve_; }
    std::size_t size() const { return xs_.size(); }
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& lift_values() const { return ys_; }

    /// Lift evaluation at any real x.
    double eval_lift(double x) const;
    /// Image angle in [0, 2pi).
    double eval_angle(double theta) const { return wrap_angle(eval_lift(theta)); }
    PointC eval_point(PointC on_circle) const;

    double inverse_lift(double y) const;

    CircleMap inverse() const;
    CircleMap iterate(int n) const;  // n may be negative

    /// Sampled angles in [0, 2pi) (breakpoints wrapped).
    std::vector<double> sample_angles() const;
    std::vector<double> sample_images() const;

    /// max_x |f^k(x) - x| taken mod full turns, evaluated at all breakpoints
    /// of the exact k-fold composite.
    double periodicity_residual(int k) const;

    /// A fixed point angle with |f(t)-t| <= tol (cyclically), if any.
    std::optional<double> fixed_point(double tol) const;

private:
    struct raw_tag {};
    explicit CircleMap(raw_tag) {}
    friend CircleMap compose(const CircleMap& f, const CircleMap& g);

    std::vector<double> xs_;  // strictly increasing, xs_.back() - xs_.front() < 2pi
    std::vector<double> ys_;  // lift values at xs_
    bool preserve_ = true;

    void validate() const;
};

/// Exact PL composition f(g(x)); breakpoints are g's plus pullbacks of f's.
CircleMap compose(const CircleMap& f, const CircleMap& g);

/// true iff the cyclic order of the images matches the cyclic order of the
/// angles; throws "non-injective" on duplicate image angles.
bool orientation_preserving(const std::vector<double>& angles, const std::vector<double>& images);

/// k-fold composite vs identity: returns (is_periodic, residual).
struct PeriodicityCheck {
    bool periodic = false;
    double residual = 0.0;
};
PeriodicityCheck is_periodic(const CircleMap& f, int k, double tol);

} // namespace qcarpet
