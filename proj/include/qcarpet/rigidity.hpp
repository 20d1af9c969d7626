#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcarpet/carpet.hpp"
#include "qcarpet/circle_map.hpp"
#include "qcarpet/extension.hpp"
#include "qcarpet/modulus.hpp"

namespace qcarpet {

// ---------------------------------------------------------------------------
// Interval maps and periodic-point witnesses
// ---------------------------------------------------------------------------

/// An increasing piecewise-linear self-homeomorphism of [s,t] fixing both
/// endpoints.
struct IntervalMap {
    std::vector<double> xs;  // breakpoints, increasing, xs.front() = s
    std::vector<double> ys;  // values, increasing, fixing the endpoints

    IntervalMap(std::vector<double> breakpoints, std::vector<double> values);
    static IntervalMap identity(double s, double t);

    double s() const { return xs.front(); }
    double t() const { return xs.back(); }
    double eval(double x) const;
};

/// A non-periodicity certificate: a point whose orbit is strictly monotone.
struct PeriodicityWitness {
    double x = 0;
    std::vector<double> orbit;  // h(x), h^2(x), ..., h^N(x)
    bool decreasing = false;
};

/// Returns a witness if h moves some probe by more than tol; the orbit
/// h(x), ..., h^N(x) is strictly monotone, certifying that x is not periodic
/// up to N. Returns nothing when h is the identity on all probes.
std::optional<PeriodicityWitness> interval_periodicity_witness(const IntervalMap& h, int N,
                                                               const std::vector<double>& probes,
                                                               double tol = 1e-12);

/// Uniform probes plus the breakpoint midpoints.
std::vector<double> default_interval_probes(const IntervalMap& h, std::size_t n = 64);

/// Cuts the circle at a fixed point of h and reduces to the interval case.
/// Throws "no fixed point: lemma hypotheses unmet" when h has none at
/// tolerance fp_tol, and "orientation" for reversing maps.
std::optional<PeriodicityWitness> circle_periodicity_witness(const CircleMap& h, int N,
                                                             std::size_t probes, double fp_tol,
                                                             double tol = 1e-12);

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

enum class Verdict { identity, witness, inconclusive };
std::string verdict_name(Verdict v);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RigidityReport {
    Verdict verdict = Verdict::inconclusive;
    double residual = 0;  // sup |f - id| over the carpet samples
    std::optional<PeriodicityWitness> witness;
    std::optional<int> orbit_period;
    std::vector<HypothesisCheck> checks;
    std::string notes;
};

/// Quasi-round carpet rigidity: checks the hypotheses (periodicity,
/// orientation, boundary fixed point), builds the periodic extension,
/// restricts to the outer boundary and runs the circle witness. Verdict
/// "identity" iff the residual is at tolerance; periodicity failures yield
/// "inconclusive" with the residual; a missing fixed point throws.
RigidityReport carpet_rigidity_pipeline(const Carpet& S, const CarpetBoundaryData& f, int k,
                                        double tol = 1e-9, int grid = 128);

/// Map data for the rectangle-ring pipeline: the outer boundary map
/// (conjugated through the rectangle chart) and the induced pairing of the
/// hole set {K} u {holes}.
struct RingMapData {
    CircleMap outer;
    HolePairing pairing;
};

struct SquarePipelineResult {
    int n = 1;  // least n with f^n(dK) = dK
    Verdict verdict = Verdict::inconclusive;
    RigidityBoundReport bound;
    bool bound_checked = false;  // false for square K (routed to the square-case result)
    std::vector<int> k_orbit;             // the orbit of K in the pairing
    std::vector<std::vector<int>> cycles;  // all pairing cycles
    std::vector<HypothesisCheck> checks;
};

/// Ring-carpet rigidity: verifies the four fixed vertices, tracks the orbit
/// of K through the pairing, and runs the modulus bound check that excludes
/// escaping orbits.
SquarePipelineResult square_carpet_pipeline(const Carpet& S, const RingMapData& f,
                                            double vertex_tol = 1e-9, int grid = 200);

/// Map data for the C* pipeline: the two boundary circle maps in log
/// coordinates and the hole pairing.
struct CstarMapData {
    CircleMap inner;
    CircleMap outer;
    HolePairing pairing;
};

struct CstarPipelineResult {
    int n = 1;          // least n with f^n(dK) = dK
    bool periodic = false;
    int period = 0;     // detected period of the boundary data
    RigidityBoundReport bound;
    bool bound_checked = false;  // false for C*-square K
    std::vector<HypothesisCheck> checks;
    std::string notes;
};

CstarPipelineResult cstar_pipeline(const Carpet& S, const CstarMapData& f, double tol = 1e-9,
                                   int grid = 200);

} // namespace qcarpet
