#pragma once

#include <optional>
#include <vector>

#include "expbasin/symbolic.hpp"

namespace expbasin {

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Uniform level-0 diameter bound: every cell of the base family has
// diameter below sqrt(1 + 16 pi^2), and the contraction factors of the
// analytic chain are expressed through M - d.
double cover_diam_bound();  // sqrt(1 + 16 pi^2)

struct CoverParams {
    double M = 20.0;           // left edge of W_M
    double delta = 0.5;        // in (0, 1]
    int depth = 2;             // number of refinements requested
    long long s_max = 64;      // truncation of the branch-letter range
    long long r_max = 0;       // truncation of the r-sum; 0 -> ceil(M) + 64
    int samples_per_cell = 256;

    void validate() const;
    long long r_lo() const;    // ceil(M)
    long long r_hi() const;    // resolved r_max
};

// A bounded planar cell: boundary sample cloud of one member of the cover
// family, with the generating word and an inflated diameter estimate.
struct CoverCell {
    int level = 0;
    BranchWord word;         // empty at level 0
    long long base_r = 0;    // abscissa of the level-0 ancestor
    int base_component = 0;  // 0 = single/lower piece, 1 = upper piece
    std::vector<cplx> points;
    double diam = 0.0;
    double margin = 0.0;     // sampling inflation absorbed into diam
    double max_deriv = 1.0;  // max word-derivative modulus over parent samples
};

// Boxes [r, r+1) x (2 pi k1 - pi, 2 pi k1 + pi] for r = ceil(M) .. r_max,
// sampled along the boundary with corners included (diam is then exact).
// A box crossed by the branch-cut ray arg z = Arg(-lambda) is emitted as its
// two components (the inverse branches jump across that ray, and the true
// cells of the construction never straddle it).
std::vector<CoverCell> level0_cells(const ExpMapConfig& cfg, const Kneading& k,
                                    const CoverParams& params);

// Pullback of one cell under G_{k,s}: image samples, inflated diameter,
// survival = some sample meets W_M. Exposed separately because survivors at
// sane truncations live at |s| of order e^M / (2 pi).
std::optional<CoverCell> pullback_cell(const ExpMapConfig& cfg, const Kneading& k,
                                       const CoverParams& params, const CoverCell& cell,
                                       StripIndex s);

// One refinement sweep over |s| <= s_max, keeping cells meeting W_M.
std::vector<CoverCell> refine(const ExpMapConfig& cfg, const Kneading& k,
                              const CoverParams& params, const std::vector<CoverCell>& cells);

struct CoverSum {
    double direct = 0.0;  // sum over enumerated cells of diam^{1+delta}
    double tail = 0.0;    // analytic truncation remainder, reported separately
    bool tail_infinite = false;
};

// Direct sum plus the closed-form truncation remainder. At level 0 the
// r-tail carries constant-diameter cells for every r > r_max, so it is
// reported as infinite. For level >= 1 the remainder is the missing part of
// the derivative-bound chain times the level-0 diameter bound. level must be
// passed explicitly because refined families can be empty.
CoverSum cover_sum(const std::vector<CoverCell>& cells, const CoverParams& params, int period,
                   int level);

// S(delta) = 1 + 2 sum_{s>=1} (pi s + 1)^{-(1+delta)}; partial sum plus an
// integral tail so the value is a strict upper bound of the series.
double s_series(double delta);
// Truncated variant: 1 + 2 sum_{s=1}^{s_max} (pi s + 1)^{-(1+delta)}.
double s_series_truncated(double delta, long long s_max);
// Closed-form bound of sum_{r >= ceil(M)} r^{-(1+delta)}.
double r_tail_bound(double M, double delta);

// Explicit majorant of the level-n chain (n >= 1):
//   p * T_r(M, delta) * ((M-d)^{-(1+delta)})^{n-1} * S(delta)^n.
double analytic_bound(int period, double M, double delta, int n);

// Least half-integer M > d+1 with analytic_bound(p, M, delta, n) < 1 for all
// n <= n_max and S(delta) * (M-d)^{-(1+delta)} < 1 (extends the check to all
// n). Throws InvalidParams for delta outside (0,1]; returns nullopt if no
// M <= 1e9 works.
std::optional<double> find_min_M(int period, double delta, int n_max);

}  // namespace expbasin
