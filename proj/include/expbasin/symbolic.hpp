#pragma once

#include <stdexcept>
#include <vector>

#include "expbasin/dynamics.hpp"

namespace expbasin {

// Thrown when an inverse branch hits the singular value 0 (no preimage).
struct ZeroArgument : std::domain_error {
    ZeroArgument() : std::domain_error("inverse branch applied to 0") {}
};

struct OrbitOverflow : std::runtime_error {
    explicit OrbitOverflow(int step)
        : std::runtime_error("orbit reached the at-infinity sentinel"), step(step) {}
    int step;
};

using StripIndex = long long;

// Kneading sequence (k_1, ..., k_{p-1}): strip indices of z_1 ... z_{p-1}.
struct Kneading {
    std::vector<StripIndex> entries;
};

// Finite itinerary prefix (s_0, ..., s_{n-1}).
struct Itinerary {
    std::vector<StripIndex> prefix;
};

// Branch composition word. letters are applied left-to-right as a
// composition: word (a, b, c) means g_a ∘ g_b ∘ g_c (g_c acts first).
struct BranchWord {
    std::vector<StripIndex> letters;
};

// g_s(z) = Log(z/lambda) + 2*pi*i*s with principal Log, Im in (-pi, pi].
// The tie-break Im = -pi is normalized to +pi so that strip_index of the
// result is always s. Throws ZeroArgument for z = 0.
cplx inverse_branch(const ExpMapConfig& cfg, StripIndex s, const cplx& z);

// The unique s with Im(w) in (2*pi*s - pi, 2*pi*s + pi].
StripIndex strip_index(const ExpMapConfig& cfg, const cplx& w);

// (strip_index(z), strip_index(f(z)), ..., strip_index(f^{depth-1}(z))).
// Throws OrbitOverflow if an iterate reaches the sentinel early.
Itinerary itinerary(const ExpMapConfig& cfg, const cplx& z, int depth);

// Requires period > 1.
Kneading kneading_sequence(const ExpMapConfig& cfg, const AttractingCycle& cycle);

// Word constructors.
BranchWord word_kneading(const Kneading& k);                     // G_k
BranchWord word_s_kneading(StripIndex s, const Kneading& k);     // G_{s,k}
BranchWord word_kneading_s(const Kneading& k, StripIndex s);     // G_{k,s}
// G_{u,k} ∘ G_{s,k}, the two-block branch used by the pressure module.
BranchWord word_pair(StripIndex u, StripIndex s, const Kneading& k);
BranchWord concat(const BranchWord& outer, const BranchWord& inner);

// Applies the composed inverse branches right-to-left.
cplx apply_word(const ExpMapConfig& cfg, const BranchWord& word, cplx z);

// Exact modulus of the composed branch derivative via |g_s'(z)| = 1/|z|
// accumulated along the backward orbit.
double word_derivative_modulus(const ExpMapConfig& cfg, const BranchWord& word, cplx z);

// True iff entries at positions == j (mod p), j = 1..p-1, equal k_j
// throughout the prefix. Requires prefix length >= p.
bool matches_sigma(const Itinerary& itin, const Kneading& k);

// matches_sigma plus at least min_breaks positions == 0 (mod p) whose entry
// is outside {k_1, ..., k_{p-1}} (finite surrogate for "infinitely many").
bool matches_sigma_prime(const Itinerary& itin, const Kneading& k, int min_breaks = 1);

// Least half-integer M such that every sampled z with Re z in [M, re_hi] and
// every |s| <= s_range satisfies |G_{k,s}'(z)| < 1/(Re(z)(pi|s|+1)). The
// contraction bound only kicks in for M beyond a lambda-dependent threshold;
// this locates it empirically.
double calibrate_m_check(const ExpMapConfig& cfg, const Kneading& k, long long s_range,
                         double re_hi = 1000.0, double m_lo = 14.0, double m_hi = 256.0);

}  // namespace expbasin
