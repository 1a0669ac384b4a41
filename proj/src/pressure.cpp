#include "expbasin/pressure.hpp"

#include <algorithm>
#include <cmath>

namespace expbasin {

namespace {

std::vector<cplx> square_boundary_samples(const SquareQ& Q, int n) {
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const int per_edge = std::max(2, n / 4);
    const double L = Q.hi - Q.lo;
    for (int i = 0; i < per_edge; ++i) pts.emplace_back(Q.lo + L * i / per_edge, Q.lo);
    for (int i = 0; i < per_edge; ++i) pts.emplace_back(Q.hi, Q.lo + L * i / per_edge);
    for (int i = 0; i < per_edge; ++i) pts.emplace_back(Q.hi - L * i / per_edge, Q.hi);
    for (int i = 0; i < per_edge; ++i) pts.emplace_back(Q.lo, Q.hi - L * i / per_edge);
    return pts;
}

std::vector<cplx> square_interior_grid(const SquareQ& Q, int n = 33) {
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    const double L = Q.hi - Q.lo;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            pts.emplace_back(Q.lo + L * (i + 0.5) / n, Q.lo + L * (j + 0.5) / n);
    return pts;
}

}  // namespace

std::variant<FiniteIfs, EmptySystem> build_finite_ifs(const ExpMapConfig& cfg,
                                                      const AttractingCycle& cycle, double R,
                                                      long long u_range, long long s_range,
                                                      int boundary_samples) {
    if (cycle.period <= 1) throw std::invalid_argument("finite IFS needs period > 1");
    Kneading k = kneading_sequence(cfg, cycle);
    FiniteIfs ifs;
    ifs.R = R;
    ifs.z_R = cplx(R, R);
    ifs.Q = SquareQ{R / 2.0, 3.0 * R / 2.0};
    ifs.u_range = u_range;
    ifs.s_range = s_range;
    ifs.max_image_re = -std::numeric_limits<double>::infinity();

    const auto boundary = square_boundary_samples(ifs.Q, boundary_samples);
    const double h = std::abs(boundary[1] - boundary[0]);
    long long candidates = 0;

    // Image Im is pinned near 2*pi*u, so u outside the vertical extent of Q
    // cannot land inside; skip it up front.
    const long long u_lo = std::max(-u_range,
        static_cast<long long>(std::floor((ifs.Q.lo - 4.0) / kTwoPi)));
    const long long u_hi = std::min(u_range,
        static_cast<long long>(std::ceil((ifs.Q.hi + 4.0) / kTwoPi)));

    for (long long u = u_lo; u <= u_hi; ++u) {
        for (long long s = -s_range; s <= s_range; ++s) {
            ++candidates;
            BranchWord w = word_pair(u, s, k);
            cplx center_img = apply_word(cfg, w, ifs.z_R);
            ifs.max_image_re = std::max(ifs.max_image_re, center_img.real());
            // sound fast-reject: accepted images have diameter well below 1
            if (!ifs.Q.contains(center_img, -4.0)) continue;
            std::vector<cplx> imgs;
            imgs.reserve(boundary.size());
            double max_deriv = 0.0;
            for (const cplx& z : boundary) {
                imgs.push_back(apply_word(cfg, w, z));
                max_deriv = std::max(max_deriv, word_derivative_modulus(cfg, w, z));
            }
            const double margin = h * max_deriv;
            bool inside = true;
            for (const cplx& img : imgs) {
                if (!ifs.Q.contains(img, margin)) {
                    inside = false;
                    break;
                }
            }
            if (!inside) continue;
            ifs.pairs.emplace_back(u, s);
            PressureBranch b;
            b.map = [cfg, w](const cplx& z) { return apply_word(cfg, w, z); };
            b.deriv_modulus = [cfg, w](const cplx& z) {
                return word_derivative_modulus(cfg, w, z);
            };
            ifs.branches.push_back(std::move(b));
        }
    }
    if (ifs.pairs.empty())
        return EmptySystem{ifs.max_image_re, candidates};

    // empirical distortion constant over an interior lattice
    double distortion = 1.0;
    const auto grid = square_interior_grid(ifs.Q);
    for (const auto& b : ifs.branches) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const cplx& z : grid) {
            double v = b.deriv_modulus(z);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo > 0.0) distortion = std::max(distortion, hi / lo);
    }
    ifs.distortion = distortion;
    return ifs;
}

double one_level_sum(const FiniteIfs& ifs, double t, const cplx& z) {
    double sum = 0.0;
    for (const auto& b : ifs.branches) sum += std::pow(b.deriv_modulus(z), t);
    return sum;
}

PressureEstimate pressure_bounds(const FiniteIfs& ifs, double t, int n) {
    if (n < 1) throw std::invalid_argument("pressure_bounds needs n >= 1");
    const auto grid = square_interior_grid(ifs.Q);
    const double log_dist = std::log(std::max(ifs.distortion, 1.0));
    PressureEstimate est;
    est.t = t;

    if (n == 1) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const cplx& z : grid) {
            double s = one_level_sum(ifs, t, z);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        est.level = 1;
        est.lower = std::log(lo);
        est.upper = std::log(hi) + t * log_dist;
        return est;
    }

    const std::size_t m = ifs.branches.size();
    double words = std::pow(static_cast<double>(m), n);
    if (m == 0 || words > static_cast<double>(kWordEnumerationCap))
        return pressure_bounds(ifs, t, 1);

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    double sum_min = 0.0, sum_max = 0.0;
    bool done = false;
    while (!done) {
        double wlo = std::numeric_limits<double>::infinity(), whi = 0.0;
        for (const cplx& z0 : grid) {
            double v = 1.0;
            cplx z = z0;
            for (int j = n - 1; j >= 0; --j) {
                const auto& b = ifs.branches[idx[static_cast<std::size_t>(j)]];
                v *= b.deriv_modulus(z);
                z = b.map(z);
            }
            wlo = std::min(wlo, v);
            whi = std::max(whi, v);
        }
        sum_min += std::pow(wlo, t);
        sum_max += std::pow(whi, t);
        // lexicographic increment
        int j = n - 1;
        while (j >= 0) {
            if (++idx[static_cast<std::size_t>(j)] < m) break;
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        done = j < 0;
    }
    est.level = n;
    est.lower = std::log(sum_min) / n;
    est.upper = std::log(sum_max) / n + t * log_dist / n;
    return est;
}

std::variant<BowenInterval, BracketFailure> bowen_root(const FiniteIfs& ifs, double t_lo,
                                                       double t_hi, double tol, int depth) {
    PressureEstimate lo = pressure_bounds(ifs, t_lo, depth);
    PressureEstimate hi = pressure_bounds(ifs, t_hi, depth);
    if (!(lo.lower > 0.0) || !(hi.upper < 0.0))
        return BracketFailure{BracketFailure::Reason::no_initial_bracket,
                              lo.lower > 0.0 ? hi : lo};
    double a = t_lo, b = t_hi;
    int d = depth;
    while (b - a > tol) {
        double m = 0.5 * (a + b);
        PressureEstimate est = pressure_bounds(ifs, m, d);
        if (est.lower > 0.0) {
            a = m;
        } else if (est.upper < 0.0) {
            b = m;
        } else {
            // The sandwich at m straddles zero: sharpen it, then give up
            // honestly if the uncertainty persists.
            if (d < 3 && std::pow(static_cast<double>(ifs.branches.size()), d + 1) <=
                             static_cast<double>(kWordEnumerationCap)) {
                ++d;
                continue;
            }
            return BracketFailure{BracketFailure::Reason::sandwich_straddles_zero, est};
        }
    }
    return BowenInterval{a, b};
}

CertifyReport certify_dim_gt_one(const ExpMapConfig& cfg, const AttractingCycle& cycle,
                                 const std::vector<double>& R_schedule, long long u_range,
                                 long long s_range) {
    CertifyReport report;
    for (double R : R_schedule) {
        CertifyRow row;
        row.R = R;
        auto built = build_finite_ifs(cfg, cycle, R, u_range, s_range);
        if (std::holds_alternative<EmptySystem>(built)) {
            row.max_image_re = std::get<EmptySystem>(built).max_image_re;
            report.rows.push_back(row);
            continue;
        }
        const FiniteIfs& ifs = std::get<FiniteIfs>(built);
        row.pairs = static_cast<long long>(ifs.pairs.size());
        row.max_image_re = ifs.max_image_re;
        row.sum_t1 = one_level_sum(ifs, 1.0, ifs.z_R);
        auto root = bowen_root(ifs, 0.9, 1.9, 1e-3);
        if (std::holds_alternative<BowenInterval>(root)) {
            row.interval = std::get<BowenInterval>(root);
            row.certified = row.interval->lo > 1.0;
        }
        report.rows.push_back(row);
        if (row.certified && !report.certified) {
            report.certified = true;
            report.certified_R = R;
            report.dim_lower = row.interval->lo;
        }
    }
    return report;
}

FiniteIfs make_toy_similarity_ifs() {
    FiniteIfs ifs;
    ifs.R = 1.0;
    ifs.Q = SquareQ{0.0, 1.0};
    ifs.z_R = cplx(0.5, 0.5);
    ifs.distortion = 1.0;
    const cplx offsets[] = {{0.0, 0.0}, {0.75, 0.0}, {0.0, 0.75}};
    long long id = 0;
    for (cplx c : offsets) {
        PressureBranch b;
        b.map = [c](const cplx& z) { return 0.25 * z + c; };
        b.deriv_modulus = [](const cplx&) { return 0.25; };
        ifs.branches.push_back(std::move(b));
        ifs.pairs.emplace_back(id++, 0);
    }
    return ifs;
}

FiniteIfs make_toy_conformal_ifs() {
    FiniteIfs ifs;
    ifs.R = 1.0;
    ifs.Q = SquareQ{0.0, 1.0};
    ifs.z_R = cplx(0.5, 0.5);
    const cplx offsets[] = {{0.1, 0.05}, {0.6, 0.05}, {0.1, 0.6}, {0.6, 0.6}};
    long long id = 0;
    for (cplx c : offsets) {
        PressureBranch b;
        b.map = [c](const cplx& z) { return c + 0.2 * z + 0.02 * z * z; };
        b.deriv_modulus = [](const cplx& z) { return std::abs(0.2 + 0.04 * z); };
        ifs.branches.push_back(std::move(b));
        ifs.pairs.emplace_back(id++, 0);
    }
    // distortion over the unit square: |0.2 + 0.04 z| spans [0.2, |0.24+0.04i|]
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const cplx& z : square_interior_grid(ifs.Q)) {
        double v = std::abs(0.2 + 0.04 * z);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ifs.distortion = hi / lo;
    return ifs;
}

}  // namespace expbasin
