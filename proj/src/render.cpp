#include "expbasin/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_set>

namespace expbasin {

void GridSpec::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("grid window must have positive extent");
    if (width < 16 || height < 16) throw std::invalid_argument("grid must be at least 16x16");
}

double ClassGrid::undecided_fraction() const {
    std::size_t n = 0;
    for (const auto& c : cells)
        if (c.undecided()) ++n;
    return cells.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(cells.size());
}

std::vector<std::size_t> ClassGrid::component_histogram() const {
    std::vector<std::size_t> hist(static_cast<std::size_t>(period) + 2, 0);
    for (const auto& c : cells) {
        if (c.attracted())
            ++hist[static_cast<std::size_t>(component_of(c, period))];
        else if (c.escaped())
            ++hist[static_cast<std::size_t>(period)];
        else
            ++hist[static_cast<std::size_t>(period) + 1];
    }
    return hist;
}

namespace {

std::uint64_t render_provenance(const ExpMapConfig& cfg, const GridSpec& spec) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "lambda=%.17g,%.17g;max_iter=%d;escape_re=%.17g;attract_tol=%.17g;"
                  "window=%.17g,%.17g,%.17g,%.17g;size=%dx%d",
                  cfg.lambda.real(), cfg.lambda.imag(), cfg.max_iter, cfg.escape_re,
                  cfg.attract_tol, spec.x_min, spec.x_max, spec.y_min, spec.y_max, spec.width,
                  spec.height);
    return fnv1a64(buf);
}

}  // namespace

ClassGrid render_grid(const ExpMapConfig& cfg, const AttractingCycle& cycle, const GridSpec& spec,
                      int threads) {
    spec.validate();
    ClassGrid grid;
    grid.spec = spec;
    grid.period = cycle.period;
    grid.provenance = render_provenance(cfg, spec);
    grid.cells.resize(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height));
    parallel_for(static_cast<std::size_t>(spec.height), threads,
                 [&](std::size_t row_b, std::size_t row_e) {
                     for (std::size_t row = row_b; row < row_e; ++row) {
                         for (int col = 0; col < spec.width; ++col) {
                             cplx z = spec.pixel_center(col, static_cast<int>(row));
                             grid.cells[row * static_cast<std::size_t>(spec.width) +
                                        static_cast<std::size_t>(col)] =
                                 classify_point(cfg, cycle, z);
                         }
                     }
                 });
    return grid;
}

PixelSet extract_boundary(const ClassGrid& grid, int phase) {
    if (phase < 0 || phase >= grid.period) throw std::invalid_argument("phase out of range");
    PixelSet out;
    const int w = grid.spec.width, h = grid.spec.height;
    auto comp = [&](int c, int r) { return component_of(grid.at(c, r), grid.period); };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (comp(c, r) != phase) continue;
            const int dc[4] = {1, -1, 0, 0};
            const int dr[4] = {0, 0, 1, -1};
            for (int i = 0; i < 4; ++i) {
                int nc = c + dc[i], nr = r + dr[i];
                if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
                if (comp(nc, nr) != phase) {
                    out.emplace_back(c, r);
                    break;
                }
            }
        }
    }
    return out;
}

PixelSet extract_component_boundary(const ClassGrid& grid, const cplx& seed) {
    const int w = grid.spec.width, h = grid.spec.height;
    const double px = (grid.spec.x_max - grid.spec.x_min) / w;
    const double py = (grid.spec.y_max - grid.spec.y_min) / h;
    int sc = static_cast<int>(std::floor((seed.real() - grid.spec.x_min) / px));
    int sr = static_cast<int>(std::floor((grid.spec.y_max - seed.imag()) / py));
    sc = std::clamp(sc, 0, w - 1);
    sr = std::clamp(sr, 0, h - 1);
    const int phase = component_of(grid.at(sc, sr), grid.period);
    if (phase < 0) throw std::invalid_argument("seed pixel is not attracted");

    std::vector<std::uint8_t> member(grid.cells.size(), 0);
    std::vector<std::pair<int, int>> stack{{sc, sr}};
    auto idx = [&](int c, int r) {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
               static_cast<std::size_t>(c);
    };
    member[idx(sc, sr)] = 1;
    const int dc[4] = {1, -1, 0, 0};
    const int dr[4] = {0, 0, 1, -1};
    while (!stack.empty()) {
        auto [c, r] = stack.back();
        stack.pop_back();
        for (int i = 0; i < 4; ++i) {
            int nc = c + dc[i], nr = r + dr[i];
            if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
            if (member[idx(nc, nr)]) continue;
            if (component_of(grid.at(nc, nr), grid.period) != phase) continue;
            member[idx(nc, nr)] = 1;
            stack.emplace_back(nc, nr);
        }
    }
    PixelSet out;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!member[idx(c, r)]) continue;
            for (int i = 0; i < 4; ++i) {
                int nc = c + dc[i], nr = r + dr[i];
                if (nc < 0 || nc >= w || nr < 0 || nr >= h) continue;
                if (component_of(grid.at(nc, nr), grid.period) != phase) {
                    out.emplace_back(c, r);
                    break;
                }
            }
        }
    }
    return out;
}

PixelSet whole_julia_surrogate(const ClassGrid& grid) {
    PixelSet out;
    for (int phase = 0; phase < grid.period; ++phase) {
        PixelSet b = extract_boundary(grid, phase);
        out.insert(out.end(), b.begin(), b.end());
    }
    for (int r = 0; r < grid.spec.height; ++r)
        for (int c = 0; c < grid.spec.width; ++c)
            if (grid.at(c, r).undecided()) out.emplace_back(c, r);
    std::sort(out.begin(), out.end(),
              [](auto& a, auto& b) { return a.second != b.second ? a.second < b.second
                                                                 : a.first < b.first; });
    return out;
}

BoxCount box_count(const PixelSet& points, const GridSpec& spec, const std::vector<int>& scales) {
    if (points.size() < 1000) throw InsufficientData("box count needs at least 1000 points");
    if (scales.size() < 4) throw InsufficientData("box count needs at least 4 scales");
    auto [mn, mx] = std::minmax_element(scales.begin(), scales.end());
    if (*mx < 4 * *mn) throw InsufficientData("scales must span at least two octaves");
    (void)spec;

    BoxCount bc;
    std::vector<double> xs, ys;
    for (int eps : scales) {
        std::unordered_set<std::uint64_t> boxes;
        boxes.reserve(points.size());
        for (const auto& [c, r] : points) {
            std::uint64_t key = (static_cast<std::uint64_t>(c / eps) << 32) |
                                static_cast<std::uint32_t>(r / eps);
            boxes.insert(key);
        }
        bc.counts.emplace_back(eps, boxes.size());
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(boxes.size())));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    bc.slope = (n * sxy - sx * sy) / denom;
    bc.intercept = (sy - bc.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0, ybar = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double fit = bc.slope * xs[i] + bc.intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    bc.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return bc;
}

std::vector<std::uint8_t> grid_to_gray(const ClassGrid& grid) {
    std::vector<std::uint8_t> img(grid.cells.size(), 0);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const PointClass& pc = grid.cells[i];
        if (pc.escaped()) {
            img[i] = 255;
        } else if (pc.attracted()) {
            int c = component_of(pc, grid.period);
            img[i] = static_cast<std::uint8_t>(64 + (128 * c) / std::max(grid.period, 1));
        } else {
            img[i] = 0;
        }
    }
    return img;
}

}  // namespace expbasin
