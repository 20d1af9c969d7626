#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qcarpet/point.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// Deterministic low-discrepancy sequences. All sampling in the library is
// seed-free so repeated runs are bit-identical.
// ---------------------------------------------------------------------------

/// i-th element of the Kronecker (golden ratio) sequence in [0,1).
inline double kronecker1(std::size_t i) {
    constexpr double phi = 0.6180339887498948482;
    double v = (static_cast<double>(i) + 1.0) * phi;
    return v - std::floor(v);
}

/// i-th element of the 2-d Kronecker sequence (plastic-number rotations).
inline PointC kronecker2(std::size_t i) {
    constexpr double a1 = 0.7548776662466927600;  // 1/rho
    constexpr double a2 = 0.5698402909980532659;  // 1/rho^2
    const double n = static_cast<double>(i) + 1.0;
    double u = n * a1, v = n * a2;
    return {u - std::floor(u), v - std::floor(v)};
}

// ---------------------------------------------------------------------------
// Parallel helpers. Work is split into contiguous chunks; each index is
// computed independently, so results never depend on the thread count.
// ---------------------------------------------------------------------------

int effective_threads();
void set_thread_count(int n);  // 0 = auto

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk_fn);

/// Deterministic parallel max of fn(i) over [0, n).
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn);

} // namespace qcarpet
