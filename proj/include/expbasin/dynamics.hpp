#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "expbasin/util.hpp"

namespace expbasin {

// The map f(z) = lambda * exp(z) and the knobs shared by every orbit
// computation. arg_lambda is cached because strip conventions depend on it.
struct ExpMapConfig {
    cplx lambda;
    double arg_lambda = 0.0;
    int max_iter = 2000;
    double escape_re = 50.0;
    double attract_tol = 1e-12;

    ExpMapConfig() = default;
    explicit ExpMapConfig(cplx lam, int max_iterations = 2000, double escape_threshold = 50.0,
                          double tol = 1e-12)
        : lambda(lam), max_iter(max_iterations), escape_re(escape_threshold), attract_tol(tol) {
        if (lambda == cplx(0.0, 0.0)) throw std::invalid_argument("lambda must be nonzero");
        if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
        arg_lambda = std::arg(lambda);
    }
};

// f(z). Overflow of exp maps to the at-infinity sentinel, never a crash.
cplx apply_map(const ExpMapConfig& cfg, const cplx& z);

// f^n(z), stopping at the sentinel once reached.
cplx apply_iter(const ExpMapConfig& cfg, cplx z, int n);

struct AttractingCycle {
    int period = 0;
    std::vector<cplx> points;  // z_0 ... z_{p-1}, f(z_j) = z_{j+1 mod p}
    cplx multiplier;           // prod f'(z_j) = prod z_j, |multiplier| < 1
};

struct NoCycle {
    enum class Reason { escaped, budget_exhausted, multiplier_not_attracting };
    Reason reason;
    int steps = 0;
};

using CycleResult = std::variant<AttractingCycle, NoCycle>;

// Iterates the singular value 0 forward, detects eventual periodicity of
// minimal period <= max_period over a trailing window, then refines each
// cycle point with damped Newton on f^p(z) - z = 0.
//
// Labeling convention: the singular value lies in the basin component U_1,
// so the limit of f^n(0) along n = 0 mod p is the cycle point z_1. Labels
// are assigned from the parity of the detection step accordingly.
CycleResult find_attracting_cycle(const ExpMapConfig& cfg, int max_period);

struct PointClass {
    enum class Tag { Attracted, Escaped, Undecided };
    Tag tag = Tag::Undecided;
    // Attracted: index j of the cycle point whose capture disk the orbit
    // entered, and the step count n at which that happened.
    std::int16_t phase = -1;
    std::int32_t steps = -1;

    bool attracted() const { return tag == Tag::Attracted; }
    bool escaped() const { return tag == Tag::Escaped; }
    bool undecided() const { return tag == Tag::Undecided; }
};

// Basin component a point synchronizes with: capture near z_j after n steps
// means the start lies in the phase (j - n mod p) part of the basin.
inline int component_of(const PointClass& pc, int period) {
    if (!pc.attracted()) return -1;
    int c = static_cast<int>((pc.phase - pc.steps) % period);
    return c < 0 ? c + period : c;
}

// Capture disk radius around each cycle point (absolute).
inline constexpr double kCaptureRadius = 0.1;
// Growth confirmation factor for the escape test.
inline constexpr double kEscapeGrowth = 2.0;

PointClass classify_point(const ExpMapConfig& cfg, const AttractingCycle& cycle, cplx z);

}  // namespace expbasin
