#pragma once

#include <complex>
#include <random>
#include <vector>

#include "expbasin/dynamics.hpp"

namespace testsup {

using cplx = expbasin::cplx;

// Independent orbit oracle in extended precision: iterates w -> lambda*e^w
// with long double components, no shared code with the library path.
inline std::complex<long double> iterate_ld(std::complex<long double> lambda,
                                            std::complex<long double> z, int n) {
    for (int i = 0; i < n; ++i) z = lambda * std::exp(z);
    return z;
}

// Reads the trailing q-cycle off a long forward run of the singular orbit.
inline std::vector<std::complex<long double>> trailing_cycle_ld(std::complex<long double> lambda,
                                                                int steps, int q) {
    std::complex<long double> z = 0.0L;
    std::vector<std::complex<long double>> tail(static_cast<std::size_t>(q));
    for (int i = 0; i < steps; ++i) {
        z = lambda * std::exp(z);
        tail[static_cast<std::size_t>(i % q)] = z;
    }
    return tail;  // tail[(steps-1) % q] is the latest iterate
}

inline cplx random_annulus(std::mt19937_64& rng, double r_lo, double r_hi) {
    std::uniform_real_distribution<double> ulog(std::log(r_lo), std::log(r_hi));
    std::uniform_real_distribution<double> uang(-expbasin::kPi, expbasin::kPi);
    double r = std::exp(ulog(rng));
    double th = uang(rng);
    return {r * std::cos(th), r * std::sin(th)};
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double fit = f.slope * xs[i] + f.intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

inline const expbasin::AttractingCycle& cycle_for_minus5() {
    static const expbasin::AttractingCycle cyc = [] {
        expbasin::ExpMapConfig cfg(cplx(-5.0, 0.0));
        auto r = expbasin::find_attracting_cycle(cfg, 8);
        return std::get<expbasin::AttractingCycle>(r);
    }();
    return cyc;
}

}  // namespace testsup
