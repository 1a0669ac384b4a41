#include "expbasin/symbolic.hpp"

#include <cmath>

namespace expbasin {

cplx inverse_branch(const ExpMapConfig& cfg, StripIndex s, const cplx& z) {
    if (z == cplx(0.0, 0.0)) throw ZeroArgument{};
    cplx base = std::log(z / cfg.lambda);
    double im = base.imag();
    // std::log yields Arg in [-pi, pi]; fold the -pi edge onto +pi so the
    // branch range is exactly Im in (2*pi*s - pi, 2*pi*s + pi].
    if (im <= -kPi) im += kTwoPi;
    return {base.real(), im + kTwoPi * static_cast<double>(s)};
}

StripIndex strip_index(const ExpMapConfig&, const cplx& w) {
    double t = (w.imag() + kPi) / kTwoPi;
    return static_cast<StripIndex>(std::ceil(t)) - 1;
}

Itinerary itinerary(const ExpMapConfig& cfg, const cplx& z, int depth) {
    Itinerary it;
    it.prefix.reserve(static_cast<std::size_t>(std::max(depth, 0)));
    cplx w = z;
    for (int n = 0; n < depth; ++n) {
        if (is_at_infinity(w)) throw OrbitOverflow(n);
        it.prefix.push_back(strip_index(cfg, w));
        w = apply_map(cfg, w);
    }
    return it;
}

Kneading kneading_sequence(const ExpMapConfig& cfg, const AttractingCycle& cycle) {
    if (cycle.period <= 1) throw std::invalid_argument("kneading sequence needs period > 1");
    Kneading k;
    k.entries.reserve(static_cast<std::size_t>(cycle.period - 1));
    for (int j = 1; j < cycle.period; ++j)
        k.entries.push_back(strip_index(cfg, cycle.points[static_cast<std::size_t>(j)]));
    return k;
}

BranchWord word_kneading(const Kneading& k) { return {k.entries}; }

BranchWord word_s_kneading(StripIndex s, const Kneading& k) {
    BranchWord w;
    w.letters.reserve(k.entries.size() + 1);
    w.letters.push_back(s);
    w.letters.insert(w.letters.end(), k.entries.begin(), k.entries.end());
    return w;
}

BranchWord word_kneading_s(const Kneading& k, StripIndex s) {
    BranchWord w{k.entries};
    w.letters.push_back(s);
    return w;
}

BranchWord word_pair(StripIndex u, StripIndex s, const Kneading& k) {
    return concat(word_s_kneading(u, k), word_s_kneading(s, k));
}

BranchWord concat(const BranchWord& outer, const BranchWord& inner) {
    BranchWord w{outer.letters};
    w.letters.insert(w.letters.end(), inner.letters.begin(), inner.letters.end());
    return w;
}

cplx apply_word(const ExpMapConfig& cfg, const BranchWord& word, cplx z) {
    if (word.letters.empty()) throw std::invalid_argument("empty branch word");
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it)
        z = inverse_branch(cfg, *it, z);
    return z;
}

double word_derivative_modulus(const ExpMapConfig& cfg, const BranchWord& word, cplx z) {
    if (word.letters.empty()) throw std::invalid_argument("empty branch word");
    double acc = 1.0;
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
        double m = std::abs(z);
        if (m == 0.0) throw ZeroArgument{};
        acc /= m;
        z = inverse_branch(cfg, *it, z);
    }
    return acc;
}

bool matches_sigma(const Itinerary& itin, const Kneading& k) {
    const int p = static_cast<int>(k.entries.size()) + 1;
    if (static_cast<int>(itin.prefix.size()) < p)
        throw std::invalid_argument("itinerary shorter than the period");
    for (std::size_t t = 0; t < itin.prefix.size(); ++t) {
        int j = static_cast<int>(t % static_cast<std::size_t>(p));
        if (j == 0) continue;
        if (itin.prefix[t] != k.entries[static_cast<std::size_t>(j - 1)]) return false;
    }
    return true;
}

bool matches_sigma_prime(const Itinerary& itin, const Kneading& k, int min_breaks) {
    if (!matches_sigma(itin, k)) return false;
    const int p = static_cast<int>(k.entries.size()) + 1;
    int breaks = 0;
    for (std::size_t t = 0; t < itin.prefix.size(); t += static_cast<std::size_t>(p)) {
        bool in_kneading = false;
        for (StripIndex kj : k.entries)
            if (itin.prefix[t] == kj) in_kneading = true;
        if (!in_kneading) ++breaks;
    }
    return breaks >= min_breaks;
}

double calibrate_m_check(const ExpMapConfig& cfg, const Kneading& k, long long s_range,
                         double re_hi, double m_lo, double m_hi) {
    // Only small |s| can bind: for |s| >= 2, |Im g_s| >= (2|s|-1)pi already
    // exceeds pi|s|+1, so the probe restricts to the binding band.
    const long long s_band = std::min<long long>(s_range, 4);
    auto violated = [&](double M) {
        const int nx = 160, ny = 161;
        for (long long s = -s_band; s <= s_band; ++s) {
            BranchWord w = word_kneading_s(k, s);
            double bound_fac = kPi * static_cast<double>(std::llabs(s)) + 1.0;
            for (int ix = 0; ix < nx; ++ix) {
                double x = M + (re_hi - M) * ix / (nx - 1);
                for (int iy = 0; iy < ny; ++iy) {
                    double y = -20.0 + 40.0 * iy / (ny - 1);
                    cplx z{x, y};
                    if (word_derivative_modulus(cfg, w, z) >= 1.0 / (x * bound_fac)) return true;
                }
            }
        }
        return false;
    };
    // The violating region sits at the left edge Re z >= M, so the predicate
    // is monotone in M and a half-integer-grid bisection is valid.
    auto grid = [&](long long i) { return m_lo + 0.5 * static_cast<double>(i); };
    long long hi = static_cast<long long>(std::ceil((m_hi - m_lo) / 0.5));
    if (violated(grid(hi))) return grid(hi);
    if (!violated(grid(0))) return grid(0);
    long long lo = 0;  // violated(lo), !violated(hi)
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (violated(grid(mid))) lo = mid; else hi = mid;
    }
    return grid(hi);
}

}  // namespace expbasin
