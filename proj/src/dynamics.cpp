#include "expbasin/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace expbasin {

cplx apply_map(const ExpMapConfig& cfg, const cplx& z) {
    if (is_at_infinity(z)) return at_infinity_sentinel();
    if (z.real() > kExpOverflowRe) return at_infinity_sentinel();
    return cfg.lambda * std::exp(z);
}

cplx apply_iter(const ExpMapConfig& cfg, cplx z, int n) {
    for (int i = 0; i < n; ++i) {
        if (is_at_infinity(z)) return at_infinity_sentinel();
        z = apply_map(cfg, z);
    }
    return z;
}

namespace {

// One damped Newton pass on F(z) = f^p(z) - z. The derivative is exact:
// (f^p)'(z) = prod_k f(f^k(z)) because f' = f.
bool newton_refine_cycle_point(const ExpMapConfig& cfg, int p, cplx& z) {
    constexpr int kMaxSteps = 60;
    constexpr double kTol = 1e-13;
    for (int it = 0; it < kMaxSteps; ++it) {
        cplx w = z;
        cplx deriv = 1.0;
        for (int k = 0; k < p; ++k) {
            w = apply_map(cfg, w);
            if (is_at_infinity(w)) return false;
            deriv *= w;  // f'(prev) = f(prev) = w
        }
        cplx F = w - z;
        cplx Fp = deriv - cplx(1.0, 0.0);
        if (std::abs(Fp) == 0.0) return false;
        cplx step = F / Fp;
        double damp = 1.0;
        cplx zn = z - step;
        // crude damping: halve until the residual does not grow
        for (int d = 0; d < 8; ++d) {
            cplx wt = zn;
            bool bad = false;
            for (int k = 0; k < p; ++k) {
                wt = apply_map(cfg, wt);
                if (is_at_infinity(wt)) { bad = true; break; }
            }
            if (!bad && std::abs(wt - zn) <= std::abs(F)) break;
            damp *= 0.5;
            zn = z - damp * step;
        }
        double scale = std::max(1.0, std::abs(z));
        z = zn;
        if (std::abs(step) * damp < kTol * scale) return true;
    }
    return true;  // converged enough for the post-hoc verification to decide
}

}  // namespace

CycleResult find_attracting_cycle(const ExpMapConfig& cfg, int max_period) {
    if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
    constexpr int kWindow = 64;
    // Detection uses a looser tolerance than attract_tol; Newton tightens later.
    const double detect_tol = std::max(cfg.attract_tol, 1e-9);

    std::vector<cplx> window;  // trailing iterates, window[i] = f^{n-kWindow+1+i}(0)
    window.reserve(kWindow);
    cplx z = 0.0;
    int detected_p = 0;
    int detect_step = -1;  // orbit step index of the window tail when detected

    for (int n = 0; n <= cfg.max_iter; ++n) {
        if (is_at_infinity(z)) return NoCycle{NoCycle::Reason::escaped, n};
        if (static_cast<int>(window.size()) == kWindow) window.erase(window.begin());
        window.push_back(z);
        int m = static_cast<int>(window.size());
        if (m >= 2 * max_period + 2) {
            for (int q = 1; q <= max_period && !detected_p; ++q) {
                if (m < 2 * q + 1) break;
                bool ok = true;
                double scale = std::max(1.0, std::abs(window[m - 1]));
                // tail must repeat with period q across the comparable part
                for (int i = 0; i <= q && ok; ++i) {
                    if (std::abs(window[m - 1 - i] - window[m - 1 - i - q]) > detect_tol * scale)
                        ok = false;
                }
                if (ok) {
                    detected_p = q;
                    detect_step = n;
                }
            }
            if (detected_p) break;
        }
        z = apply_map(cfg, z);
    }
    if (!detected_p) return NoCycle{NoCycle::Reason::budget_exhausted, cfg.max_iter};

    int p = detected_p;
    int m = static_cast<int>(window.size());
    // Refine each cycle point independently, seeded from the window tail.
    // window[m-1] is f^{detect_step}(0).
    std::vector<cplx> pts(p);
    std::vector<int> orbit_step(p);
    for (int i = 0; i < p; ++i) {
        cplx seed = window[m - 1 - i];
        if (!newton_refine_cycle_point(cfg, p, seed))
            return NoCycle{NoCycle::Reason::budget_exhausted, detect_step};
        pts[i] = seed;
        orbit_step[i] = detect_step - i;
    }

    // Minimality: if refined points collapse, reduce to the true period.
    for (int q = 1; q < p; ++q) {
        if (p % q != 0) continue;
        bool collapse = true;
        for (int i = 0; i + q < p && collapse; ++i) {
            if (std::abs(pts[i] - pts[i + q]) > 1e-8 * std::max(1.0, std::abs(pts[i])))
                collapse = false;
        }
        if (collapse) {
            p = q;
            pts.resize(p);
            orbit_step.resize(p);
            break;
        }
    }

    // Canonical labels: f^n(0) lies in U_{(n+1) mod p}, so the point refined
    // from orbit step n gets label (n+1) mod p.
    AttractingCycle cyc;
    cyc.period = p;
    cyc.points.assign(p, cplx(0.0, 0.0));
    for (int i = 0; i < p; ++i) {
        int label = ((orbit_step[i] + 1) % p + p) % p;
        cyc.points[label] = pts[i];
    }

    // Post-hoc verification of the cycle invariants.
    cplx mult = 1.0;
    for (int j = 0; j < p; ++j) {
        cplx img = apply_map(cfg, cyc.points[j]);
        cplx next = cyc.points[(j + 1) % p];
        double scale = std::max(1.0, std::abs(cyc.points[j]));
        if (std::abs(img - next) > cfg.attract_tol * scale)
            return NoCycle{NoCycle::Reason::budget_exhausted, detect_step};
        mult *= next;  // f'(z_j) = f(z_j) = z_{j+1}
    }
    cyc.multiplier = mult;
    if (!(std::abs(mult) < 1.0))
        return NoCycle{NoCycle::Reason::multiplier_not_attracting, detect_step};
    return cyc;
}

PointClass classify_point(const ExpMapConfig& cfg, const AttractingCycle& cycle, cplx z) {
    const int p = cycle.period;
    for (int n = 0; n <= cfg.max_iter; ++n) {
        if (is_at_infinity(z)) return {PointClass::Tag::Escaped, -1, static_cast<std::int32_t>(n)};
        for (int j = 0; j < p; ++j) {
            if (std::abs(z - cycle.points[j]) < kCaptureRadius)
                return {PointClass::Tag::Attracted, static_cast<std::int16_t>(j),
                        static_cast<std::int32_t>(n)};
        }
        cplx next = apply_map(cfg, z);
        if (z.real() > cfg.escape_re) {
            double zn = std::abs(z);
            if (is_at_infinity(next) || std::abs(next) > kEscapeGrowth * zn)
                return {PointClass::Tag::Escaped, -1, static_cast<std::int32_t>(n)};
        }
        z = next;
    }
    return {PointClass::Tag::Undecided, -1, static_cast<std::int32_t>(cfg.max_iter)};
}

}  // namespace expbasin
