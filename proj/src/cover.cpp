#include "expbasin/cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace expbasin {

double cover_diam_bound() { return std::sqrt(1.0 + 16.0 * kPi * kPi); }

void CoverParams::validate() const {
    const double d = cover_diam_bound();
    if (!(M > d + 1.0)) throw InvalidParams("M must exceed sqrt(1+16pi^2) + 1");
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidParams("delta must lie in (0, 1]");
    if (s_max < 8) throw InvalidParams("s_max must be at least 8");
    if (r_max != 0 && r_max < r_lo() + 7) throw InvalidParams("r_max must span at least 8 cells");
    if (samples_per_cell < 16) throw InvalidParams("samples_per_cell must be at least 16");
    if (depth < 0) throw InvalidParams("depth must be nonnegative");
}

long long CoverParams::r_lo() const { return static_cast<long long>(std::ceil(M)); }

long long CoverParams::r_hi() const { return r_max != 0 ? r_max : r_lo() + 64; }

namespace {

double sample_diameter(const std::vector<cplx>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, std::abs(pts[i] - pts[j]));
    return best;
}

// Max gap between consecutive boundary samples (cyclic): the sampling step
// that the inflation factor has to cover.
double sample_spacing(const std::vector<cplx>& pts) {
    double h = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        h = std::max(h, std::abs(pts[(i + 1) % pts.size()] - pts[i]));
    return h;
}

}  // namespace

namespace {

// Boundary samples of a convex polygon, every vertex included once so the
// sample diameter equals the true diameter.
std::vector<cplx> sample_polygon(const std::vector<cplx>& verts, int n) {
    double per = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        per += std::abs(verts[(i + 1) % verts.size()] - verts[i]);
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n) + verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        cplx a = verts[i], b = verts[(i + 1) % verts.size()];
        double len = std::abs(b - a);
        int m = std::max(1, static_cast<int>(std::lround(n * len / per)));
        for (int j = 0; j < m; ++j)
            pts.push_back(a + (b - a) * (static_cast<double>(j) / m));
    }
    return pts;
}

}  // namespace

std::vector<CoverCell> level0_cells(const ExpMapConfig& cfg, const Kneading& k,
                                    const CoverParams& params) {
    params.validate();
    if (k.entries.empty()) throw InvalidParams("kneading sequence required (period > 1)");
    const double y0 = kTwoPi * static_cast<double>(k.entries.front()) - kPi;
    const double y1 = y0 + kTwoPi;
    const int n = params.samples_per_cell;

    // The inverse branches jump across the ray arg z = Arg(-lambda); a cell
    // crossed by it must be split into its two pieces or its pullbacks
    // smear across a full strip height.
    const double theta = std::arg(-cfg.lambda);
    const bool ray_rightward = std::cos(theta) > 0.0;
    const double slope = ray_rightward ? std::tan(theta) : 0.0;

    std::vector<CoverCell> cells;
    cells.reserve(2 * static_cast<std::size_t>(params.r_hi() - params.r_lo() + 1));
    auto emit = [&](long long r, int component, const std::vector<cplx>& verts) {
        CoverCell c;
        c.level = 0;
        c.base_r = r;
        c.base_component = component;
        c.points = sample_polygon(verts, n);
        c.diam = sample_diameter(c.points);
        c.margin = 0.0;  // exact polygon: vertices are sampled
        c.max_deriv = 1.0;
        cells.push_back(std::move(c));
    };
    for (long long r = params.r_lo(); r <= params.r_hi(); ++r) {
        const double x0 = static_cast<double>(r), x1 = x0 + 1.0;
        const double c0 = x0 * slope, c1 = x1 * slope;
        const bool crosses =
            ray_rightward && std::max(c0, c1) > y0 + 1e-9 && std::min(c0, c1) < y1 - 1e-9;
        if (!crosses) {
            emit(r, 0, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
            continue;
        }
        const double off = 1e-9;  // keep the lower piece off the cut itself
        const double cl0 = std::clamp(c0, y0, y1), cl1 = std::clamp(c1, y0, y1);
        emit(r, 0, {{x0, y0}, {x1, y0}, {x1, cl1 - off}, {x0, cl0 - off}});
        emit(r, 1, {{x0, cl0}, {x1, cl1}, {x1, y1}, {x0, y1}});
    }
    return cells;
}

std::optional<CoverCell> pullback_cell(const ExpMapConfig& cfg, const Kneading& k,
                                       const CoverParams& params, const CoverCell& cell,
                                       StripIndex s) {
    BranchWord step = word_kneading_s(k, s);
    CoverCell child;
    child.level = cell.level + 1;
    child.word = concat(step, cell.word);
    child.base_r = cell.base_r;
    child.base_component = cell.base_component;
    child.points.reserve(cell.points.size());
    bool meets = false;
    double max_deriv = 0.0;
    for (const cplx& z : cell.points) {
        child.points.push_back(apply_word(cfg, step, z));
        max_deriv = std::max(max_deriv, word_derivative_modulus(cfg, step, z));
        if (child.points.back().real() >= params.M) meets = true;
    }
    if (!meets) return std::nullopt;
    const double h = sample_spacing(cell.points);
    child.max_deriv = max_deriv;
    const double raw = sample_diameter(child.points);
    // Quantization floor: the sample cloud cannot resolve diameters below a
    // few ulps of its own coordinates plus the contracted ulps of the
    // intermediate images (which carry Im ~ 2 pi s), so the estimate never
    // reports smaller than that.
    double child_coord = 0.0, parent_coord = 0.0;
    for (const cplx& z : child.points)
        child_coord = std::max({child_coord, std::abs(z.real()), std::abs(z.imag())});
    for (const cplx& z : cell.points)
        parent_coord = std::max({parent_coord, std::abs(z.real()), std::abs(z.imag())});
    const double eps = std::numeric_limits<double>::epsilon();
    const double quantization =
        4.0 * eps * child_coord +
        4.0 * eps * (kTwoPi * std::abs(static_cast<double>(s)) + parent_coord) * max_deriv;
    child.diam = std::max(raw * (1.0 + 2.0 * max_deriv * h), quantization);
    child.margin = child.diam - raw;
    return child;
}

std::vector<CoverCell> refine(const ExpMapConfig& cfg, const Kneading& k,
                              const CoverParams& params, const std::vector<CoverCell>& cells) {
    params.validate();
    std::vector<CoverCell> out;
    for (const CoverCell& cell : cells) {
        for (StripIndex s = -params.s_max; s <= params.s_max; ++s) {
            auto child = pullback_cell(cfg, k, params, cell, s);
            if (child) out.push_back(std::move(*child));
        }
    }
    return out;
}

double s_series(double delta) {
    if (!(delta > 0.0)) return std::numeric_limits<double>::infinity();
    static thread_local std::map<double, double> cache;
    auto it = cache.find(delta);
    if (it != cache.end()) return it->second;
    const long long N = 1'000'000;
    double sum = 0.0;
    for (long long s = N; s >= 1; --s)  // ascending magnitudes for accuracy
        sum += std::pow(kPi * static_cast<double>(s) + 1.0, -(1.0 + delta));
    // integral tail, a strict upper bound of the remainder
    sum += std::pow(kPi * static_cast<double>(N) + 1.0, -delta) / (kPi * delta);
    double v = 1.0 + 2.0 * sum;
    cache.emplace(delta, v);
    return v;
}

double s_series_truncated(double delta, long long s_max) {
    double sum = 0.0;
    for (long long s = s_max; s >= 1; --s)
        sum += std::pow(kPi * static_cast<double>(s) + 1.0, -(1.0 + delta));
    return 1.0 + 2.0 * sum;
}

double r_tail_bound(double M, double delta) {
    return std::pow(M, -delta) / delta + std::pow(M, -(1.0 + delta));
}

double analytic_bound(int period, double M, double delta, int n) {
    const double d = cover_diam_bound();
    if (!(M > d + 1.0) || !(delta > 0.0 && delta <= 1.0) || n < 1)
        throw InvalidParams("analytic_bound needs M > d+1, delta in (0,1], n >= 1");
    const double contraction = std::pow(M - d, -(1.0 + delta) * (n - 1));
    return static_cast<double>(period) * r_tail_bound(M, delta) * contraction *
           std::pow(s_series(delta), n);
}

std::optional<double> find_min_M(int period, double delta, int n_max) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidParams("delta must lie in (0, 1]");
    if (n_max < 1) throw InvalidParams("n_max must be >= 1");
    const double d = cover_diam_bound();
    auto grid = [&](long long i) {
        return 0.5 * (std::floor(2.0 * (d + 1.0)) + 1.0 + static_cast<double>(i));
    };
    auto admissible = [&](double M) {
        if (s_series(delta) * std::pow(M - d, -(1.0 + delta)) >= 1.0) return false;
        for (int n = 1; n <= n_max; ++n)
            if (analytic_bound(period, M, delta, n) >= 1.0) return false;
        return true;
    };
    // every factor of the bound decreases in M, so the predicate is monotone
    long long step = 1;
    while (!admissible(grid(step))) {
        step *= 2;
        if (grid(step) > 1e9) return std::nullopt;
    }
    long long lo = step / 2, hi = step;  // grid(hi) admissible
    if (admissible(grid(0))) return grid(0);
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (admissible(grid(mid))) hi = mid; else lo = mid;
    }
    return grid(hi);
}

CoverSum cover_sum(const std::vector<CoverCell>& cells, const CoverParams& params, int period,
                   int level) {
    CoverSum out;
    const double e = 1.0 + params.delta;
    for (const CoverCell& c : cells) out.direct += std::pow(c.diam, e);
    if (!(params.delta > 0.0)) {
        out.tail_infinite = true;
        return out;
    }
    if (level == 0) {
        // r > r_max cells all share the box diameter: the remainder diverges.
        out.tail_infinite = true;
        return out;
    }
    const double d = cover_diam_bound();
    const double contraction = std::pow(params.M - d, -e * (level - 1));
    double tr_full = r_tail_bound(params.M, params.delta);
    double tr_trunc = 0.0;
    for (long long r = params.r_hi(); r >= params.r_lo(); --r)
        tr_trunc += std::pow(static_cast<double>(r), -e);
    const double s_full = s_series(params.delta);
    const double s_trunc = s_series_truncated(params.delta, params.s_max);
    double full = tr_full * std::pow(s_full, level);
    double trunc = std::min(full, tr_trunc * std::pow(s_trunc, level));
    out.tail = std::pow(d, e) * static_cast<double>(period) * contraction * (full - trunc);
    return out;
}

}  // namespace expbasin
