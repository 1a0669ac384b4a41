#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string_view>
#include <thread>
#include <vector>

namespace expbasin {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Modulus beyond which an orbit is treated as gone to infinity.
inline constexpr double kInfinityModulus = 1e300;
// exp() of a real part above this overflows double.
inline constexpr double kExpOverflowRe = 709.0;

inline bool is_at_infinity(const cplx& z) {
    return !std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
           std::abs(z.real()) > kInfinityModulus || std::abs(z.imag()) > kInfinityModulus;
}

// Sentinel returned instead of an overflowing exp image.
inline cplx at_infinity_sentinel() {
    return {std::numeric_limits<double>::infinity(), 0.0};
}

// FNV-1a, used for config/content hashes in manifests.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Runs fn(begin, end) on disjoint index ranges. Caller owns determinism:
// workers must only write to their own slots.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t hw = threads > 0 ? static_cast<std::size_t>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min(hw, n);
    if (hw <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(hw);
    std::size_t chunk = (n + hw - 1) / hw;
    for (std::size_t t = 0; t < hw; ++t) {
        std::size_t b = t * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

}  // namespace expbasin
