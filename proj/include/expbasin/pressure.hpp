#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "expbasin/symbolic.hpp"

namespace expbasin {

// One contracting conformal branch defined on the square Q.
struct PressureBranch {
    std::function<cplx(const cplx&)> map;
    std::function<double(const cplx&)> deriv_modulus;
};

struct SquareQ {
    double lo = 0.0, hi = 1.0;
    bool contains(const cplx& z, double margin = 0.0) const {
        return z.real() >= lo + margin && z.real() <= hi - margin && z.imag() >= lo + margin &&
               z.imag() <= hi - margin;
    }
};

// Finite conformal IFS on Q with branch evaluators and the empirical
// distortion constant over a Q-grid.
struct FiniteIfs {
    double R = 0.0;
    cplx z_R;
    SquareQ Q;
    std::vector<std::pair<long long, long long>> pairs;  // (u, s) indices
    std::vector<PressureBranch> branches;                // same order as pairs
    double distortion = 1.0;
    long long u_range = 0, s_range = 0;
    double max_image_re = 0.0;  // diagnostic: best Re reached by any candidate
};

struct EmptySystem {
    double max_image_re = 0.0;
    long long candidates = 0;
};

// Builds { h_{u,s} = G_{u,k} ∘ G_{s,k} : image of Q inside Q } for the square
// Q = [R/2, 3R/2]^2. Pairs are accepted from boundary samples whose hull,
// inflated by the sampling margin, stays inside Q. Returns EmptySystem when
// nothing is accepted (the R-vs-index scale makes this the generic outcome
// for exponential branches; the diagnostic records how far images got).
std::variant<FiniteIfs, EmptySystem> build_finite_ifs(const ExpMapConfig& cfg,
                                                      const AttractingCycle& cycle, double R,
                                                      long long u_range, long long s_range,
                                                      int boundary_samples = 1024);

// Sum over pairs of |h'(z)|^t.
double one_level_sum(const FiniteIfs& ifs, double t, const cplx& z);

struct PressureEstimate {
    double t = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int level = 1;
};

// Sandwich for the pressure P(t): grid inf/sup of depth-n word sums with the
// distortion correction on the upper side, divided by n. Falls back to the
// n = 1 sandwich when the word count would exceed the enumeration cap.
PressureEstimate pressure_bounds(const FiniteIfs& ifs, double t, int n);

inline constexpr std::size_t kWordEnumerationCap = 1'000'000;

struct BowenInterval {
    double lo = 0.0, hi = 0.0;
};
struct BracketFailure {
    enum class Reason { no_initial_bracket, sandwich_straddles_zero };
    Reason reason;
    PressureEstimate at;
};

// Bisects on the sign of the pressure sandwich. On success returns [a, b]
// with hi - lo <= tol, lower(a) > 0 and upper(b) < 0, so dim_H(X) lies in it.
std::variant<BowenInterval, BracketFailure> bowen_root(const FiniteIfs& ifs, double t_lo,
                                                       double t_hi, double tol, int depth = 1);

struct CertifyRow {
    double R = 0.0;
    long long pairs = 0;
    double sum_t1 = 0.0;
    std::optional<BowenInterval> interval;
    double max_image_re = 0.0;
    bool certified = false;
};

struct CertifyReport {
    std::vector<CertifyRow> rows;
    bool certified = false;
    double certified_R = 0.0;
    // Certified lower bound for dim_H, doubling as a hyperbolic-dimension
    // lower bound for the bounded-orbit boundary set.
    double dim_lower = 0.0;
};

CertifyReport certify_dim_gt_one(const ExpMapConfig& cfg, const AttractingCycle& cycle,
                                 const std::vector<double>& R_schedule, long long u_range,
                                 long long s_range);

// Validation systems with known behavior.
FiniteIfs make_toy_similarity_ifs();  // three ratio-1/4 similarities; dim = log 3 / log 4
FiniteIfs make_toy_conformal_ifs();   // four mildly nonlinear conformal contractions

}  // namespace expbasin
