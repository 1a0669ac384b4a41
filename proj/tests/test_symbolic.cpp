#include "doctest.h"

#include <cmath>
#include <random>

#include "expbasin/symbolic.hpp"
#include "test_support.hpp"

using namespace expbasin;
using testsup::cycle_for_minus5;

TEST_SUITE_BEGIN("symbolic");

namespace {
const ExpMapConfig& cfg5() {
    static ExpMapConfig cfg(cplx(-5.0, 0.0));
    return cfg;
}
Kneading kneading5() { return kneading_sequence(cfg5(), cycle_for_minus5()); }
}  // namespace

TEST_CASE("inverse branch basics") {
    ExpMapConfig cfg(cplx(2.0, 1.0));
    CHECK(std::abs(inverse_branch(cfg, 0, cfg.lambda)) < 1e-15);
    cplx six_pi_i = inverse_branch(cfg, 3, cfg.lambda);
    CHECK(six_pi_i.real() == doctest::Approx(0.0));
    CHECK(six_pi_i.imag() == doctest::Approx(6.0 * kPi));
    CHECK_THROWS_AS(inverse_branch(cfg, 0, cplx(0.0, 0.0)), ZeroArgument);

    // branch inversion of a known forward image: f(1) = -5e
    cplx img = apply_map(cfg5(), cplx(1.0, 0.0));
    CHECK(std::abs(inverse_branch(cfg5(), 0, img) - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("inversion and strip consistency on random samples") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> us(-50, 50);
    for (int i = 0; i < 2000; ++i) {
        long long s = us(rng);
        cplx z = testsup::random_annulus(rng, 1.0, 1e6);
        cplx w = inverse_branch(cfg5(), s, z);
        CHECK(std::abs(apply_map(cfg5(), w) - z) <= 1e-12 * std::abs(z));
        CHECK(strip_index(cfg5(), w) == s);
    }
}

TEST_CASE("branch periodicity is exact by construction") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long long> us(-50, 50);
    for (int i = 0; i < 500; ++i) {
        long long s = us(rng);
        cplx z = testsup::random_annulus(rng, 0.1, 1e4);
        cplx base = inverse_branch(cfg5(), 0, z);
        cplx shifted = inverse_branch(cfg5(), s, z);
        CHECK(shifted.real() == base.real());
        CHECK(shifted.imag() == base.imag() + kTwoPi * static_cast<double>(s));
    }
}

TEST_CASE("strip index convention") {
    CHECK(strip_index(cfg5(), cplx(0.0, 0.0)) == 0);
    CHECK(strip_index(cfg5(), cplx(3.0, kTwoPi)) == 1);
    CHECK(strip_index(cfg5(), cplx(-2.0, kPi)) == 0);  // Im = pi belongs to strip 0
    // two ulps above pi is resolvable; one ulp ties back to the boundary
    CHECK(strip_index(cfg5(), cplx(0.0, std::nextafter(std::nextafter(kPi, 4.0), 4.0))) == 1);
    CHECK(strip_index(cfg5(), cplx(0.0, -kPi)) == -1);
    CHECK(strip_index(cfg5(), cplx(0.0, -3.0 * kPi + 0.1)) == -1);
}

TEST_CASE("itinerary of the real cycle stays in strip 0") {
    const auto& cyc = cycle_for_minus5();
    Itinerary it = itinerary(cfg5(), cyc.points[0], 4);
    REQUIRE(it.prefix.size() == 4);
    for (StripIndex s : it.prefix) CHECK(s == 0);

    Itinerary empty = itinerary(cfg5(), cyc.points[0], 0);
    CHECK(empty.prefix.empty());

    CHECK_THROWS_AS(itinerary(cfg5(), cplx(750.0, 0.0), 5), OrbitOverflow);
}

TEST_CASE("kneading sequence for lambda=-5 is (0), consistent with the itinerary") {
    const auto& cyc = cycle_for_minus5();
    Kneading k = kneading5();
    REQUIRE(k.entries.size() == 1);
    CHECK(k.entries[0] == 0);

    // itinerary(f(z_0), p-1) reproduces the kneading block
    cplx z = apply_map(cfg5(), cyc.points[0]);
    Itinerary it = itinerary(cfg5(), z, cyc.period - 1);
    CHECK(it.prefix == k.entries);

    // determinism under recomputation
    Kneading again = kneading_sequence(cfg5(), cyc);
    CHECK(again.entries == k.entries);
}

TEST_CASE("nonzero kneading entries come from high cycle points") {
    // A period-2 cycle with a point at height ~2pi can be designed by a
    // 2-variable Newton on z_1 = lambda e^{z_0}, z_0 = lambda e^{z_1} with
    // the high point as target. The resulting parameter is a genuine
    // attractor, but the kneading entry is the strip of the cycle point
    // sharing the singular value's component, and that point is the small
    // one: its kneading is (0), not (1). A lambda-plane scan confirms all
    // period-2 attractors in [-8,2]x[0.5,9.5] carry kneading (0).
    cplx z1(-5.0, kTwoPi);
    cplx lam = z1;          // e^{z_0} ~ 1 for small z_0
    cplx z0 = z1 * std::exp(z1);
    for (int it = 0; it < 200; ++it) {
        cplx e0 = std::exp(z0), e1 = std::exp(z1);
        cplx F1 = lam * e0 - z1;
        cplx F2 = lam * e1 - z0;
        // J = [[e0, lam*e0], [e1, -1]]
        cplx det = e0 * (-1.0) - lam * e0 * e1;
        cplx dlam = (F1 * (-1.0) - lam * e0 * F2) / det;
        cplx dz0 = (e0 * F2 - e1 * F1) / det;
        lam -= dlam;
        z0 -= dz0;
        if (std::abs(F1) + std::abs(F2) < 1e-14) break;
    }
    CHECK(std::abs(lam * std::exp(z0) - z1) < 1e-12);
    CHECK(std::abs(lam * std::exp(z1) - z0) < 1e-12);
    CHECK(std::abs(z0 * z1) < 1.0);  // attracting

    ExpMapConfig cfg(lam);
    auto found = find_attracting_cycle(cfg, 4);
    REQUIRE(std::holds_alternative<AttractingCycle>(found));
    const auto& cyc = std::get<AttractingCycle>(found);
    REQUIRE(cyc.period == 2);
    Kneading k = kneading_sequence(cfg, cyc);
    REQUIRE(k.entries.size() == 1);
    CHECK(k.entries[0] == 0);
    CHECK(std::abs(cyc.points[1] - z0) < 1e-8);  // the small point is z_1
    CHECK(std::abs(cyc.points[0] - z1) < 1e-8);  // the high point sits at phase 0

    // The realizable analog: a period-3 parameter whose z_2 lies in strip 1.
    ExpMapConfig cfg3(cplx(-0.26890756302520913, 7.533613445378151));
    auto found3 = find_attracting_cycle(cfg3, 6);
    REQUIRE(std::holds_alternative<AttractingCycle>(found3));
    const auto& cyc3 = std::get<AttractingCycle>(found3);
    REQUIRE(cyc3.period == 3);
    CHECK(cyc3.points[2].imag() > kPi);
    CHECK(cyc3.points[2].imag() <= 3.0 * kPi);
    Kneading k3 = kneading_sequence(cfg3, cyc3);
    REQUIRE(k3.entries.size() == 2);
    CHECK(k3.entries[0] == 0);
    CHECK(k3.entries[1] == 1);
}

TEST_CASE("apply_word inverts iterated application") {
    Kneading k = kneading5();
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long long> us(-20, 20);

    // single letter
    for (int i = 0; i < 200; ++i) {
        long long s = us(rng);
        cplx z = testsup::random_annulus(rng, 1.0, 100.0);
        BranchWord w{{s}};
        CHECK(std::abs(apply_map(cfg5(), apply_word(cfg5(), w, z)) - z) < 1e-12 * std::abs(z));
    }

    // kneading word on W_M: Re(g(z)) = ln|z| - ln|lambda|
    for (int i = 0; i < 200; ++i) {
        cplx z(30.0 + 900.0 * i / 199.0, -40.0 + 80.0 * (i % 37) / 36.0);
        cplx w = apply_word(cfg5(), word_kneading(k), z);
        CHECK(w.real() == doctest::Approx(std::log(std::abs(z)) - std::log(5.0)).epsilon(1e-12));
    }

    // words of the composite-block lengths the toolkit uses (up to 2p)
    // invert f^n to the stated tolerance; the roundtrip error grows like
    // eps times the product of forward derivatives along the chain, so the
    // letter range is kept where that product stays far below 1e7
    std::uniform_int_distribution<long long> us8(-8, 8);
    for (int i = 0; i < 1000; ++i) {
        int n = 1 + static_cast<int>(i % 4);
        BranchWord w;
        for (int j = 0; j < n; ++j) w.letters.push_back(us8(rng));
        cplx z(20.0 + 980.0 * (i % 101) / 100.0, -30.0 + 60.0 * (i % 13) / 12.0);
        cplx back = apply_word(cfg5(), w, z);
        cplx fwd = apply_iter(cfg5(), back, n);
        CHECK(std::abs(fwd - z) <= 1e-9 * std::abs(z));
    }
}

TEST_CASE("word derivative modulus: single branch and the M >= M_check bound") {
    Kneading k = kneading5();
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
        cplx z = testsup::random_annulus(rng, 2.0, 1e5);
        BranchWord w{{3}};
        CHECK(word_derivative_modulus(cfg5(), w, z) ==
              doctest::Approx(1.0 / std::abs(z)).epsilon(1e-14));
    }

    // at M = 100 (above the calibrated threshold) the contraction bound holds
    const double M = 100.0;
    std::uniform_real_distribution<double> ux(M, 1000.0), uy(-20.0, 20.0);
    std::uniform_int_distribution<long long> us(-50, 50);
    for (int i = 0; i < 4000; ++i) {
        cplx z(ux(rng), uy(rng));
        long long s = us(rng);
        double lhs = word_derivative_modulus(cfg5(), word_kneading_s(k, s), z);
        double rhs = 1.0 / (z.real() * (kPi * static_cast<double>(std::llabs(s)) + 1.0));
        CHECK(lhs < rhs);
    }
}

TEST_CASE("the contraction bound genuinely fails below the threshold") {
    // documents why the M in the bound has to be large: at M = 20 the
    // inequality is violated at honest sample points (here z = 20 + 5i,
    // s = 1, which lies outside the basin fingers)
    Kneading k = kneading5();
    cplx z(20.0, 5.0);
    double lhs = word_derivative_modulus(cfg5(), word_kneading_s(k, 1), z);
    double rhs = 1.0 / (z.real() * (kPi + 1.0));
    CHECK(lhs > rhs);

    double m_check = calibrate_m_check(cfg5(), k, 50);
    CHECK(m_check >= 70.0);
    CHECK(m_check <= 80.0);
}

TEST_CASE("log derivative decays affinely in word length") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<long long> us(-5, 5);
    std::vector<double> xs, ys;
    const cplx z0(12.0, 3.0);
    for (int len = 1; len <= 30; ++len) {
        double mean = 0.0;
        const int reps = 40;
        for (int rep = 0; rep < reps; ++rep) {
            BranchWord w;
            for (int j = 0; j < len; ++j) w.letters.push_back(us(rng));
            mean += std::log(word_derivative_modulus(cfg5(), w, z0));
        }
        xs.push_back(static_cast<double>(len));
        ys.push_back(mean / reps);
    }
    auto fit = testsup::fit_line(xs, ys);
    CHECK(fit.slope <= -0.3);
    CHECK(fit.r2 > 0.99);
}

TEST_CASE("sigma pattern predicates") {
    Kneading k;
    k.entries = {0};

    Itinerary good{{5, 0, -3, 0, 7, 0}};
    CHECK(matches_sigma(good, k));

    Itinerary breaks{{5, 0, 0, 0, 7, 0}};
    CHECK(matches_sigma_prime(breaks, k, 2));
    CHECK_FALSE(matches_sigma_prime(breaks, k, 3));

    Itinerary bad{{5, 1, 0, 0, 7, 0}};
    CHECK_FALSE(matches_sigma(bad, k));

    Itinerary tooshort{{5}};
    CHECK_THROWS_AS(matches_sigma(tooshort, k), std::invalid_argument);

    // p = 3 pattern: positions 1,2 mod 3 must match (k1, k2)
    Kneading k3;
    k3.entries = {2, -1};
    Itinerary it3{{9, 2, -1, 0, 2, -1}};
    CHECK(matches_sigma(it3, k3));
    CHECK(matches_sigma_prime(it3, k3, 2));  // breaks at 9 and 0
    Itinerary it3bad{{9, 2, 1, 0, 2, -1}};
    CHECK_FALSE(matches_sigma(it3bad, k3));
}

TEST_SUITE_END();
