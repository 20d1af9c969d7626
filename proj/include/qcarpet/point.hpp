#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace qcarpet {

inline constexpr double kTau = 2.0 * std::numbers::pi;

/// A point of the plane, identified with a complex number where convenient.
struct PointC {
    double x = 0.0;
    double y = 0.0;

    constexpr PointC() = default;
    constexpr PointC(double px, double py) : x(px), y(py) {}
    explicit PointC(std::complex<double> z) : x(z.real()), y(z.imag()) {}

    std::complex<double> cplx() const { return {x, y}; }

    PointC operator+(const PointC& o) const { return {x + o.x, y + o.y}; }
    PointC operator-(const PointC& o) const { return {x - o.x, y - o.y}; }
    PointC operator*(double s) const { return {x * s, y * s}; }
    PointC operator/(double s) const { return {x / s, y / s}; }
    PointC& operator+=(const PointC& o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline PointC operator*(double s, const PointC& p) { return p * s; }

inline double dist(const PointC& a, const PointC& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double dist2(const PointC& a, const PointC& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double cross(const PointC& a, const PointC& b) { return a.x * b.y - a.y * b.x; }
inline double dot(const PointC& a, const PointC& b) { return a.x * b.x + a.y * b.y; }

inline PointC circle_point(double angle, double radius = 1.0) {
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Wrap an angle into [0, 2pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTau);
    if (r < 0.0) r += kTau;
    if (r >= kTau) r = 0.0;
    return r;
}

/// Cyclic difference b - a taken in [0, 2pi).
inline double cyclic_delta(double a, double b) { return wrap_angle(b - a); }

} // namespace qcarpet
