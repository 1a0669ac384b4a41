#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "expbasin/dynamics.hpp"

namespace expbasin {

struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    double x_min = -7.0, x_max = 6.0;
    double y_min = -6.5, y_max = 6.5;
    int width = 1024, height = 1024;

    void validate() const;
    // Pixel centers; row 0 is the top of the window (y_max side).
    cplx pixel_center(int col, int row) const {
        return {x_min + (x_max - x_min) * (col + 0.5) / width,
                y_max - (y_max - y_min) * (row + 0.5) / height};
    }
};

struct ClassGrid {
    GridSpec spec;
    int period = 1;
    std::vector<PointClass> cells;  // row-major, width * height
    std::uint64_t provenance = 0;   // hash of the full resolved config

    const PointClass& at(int col, int row) const {
        return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(spec.width) +
                     static_cast<std::size_t>(col)];
    }
    double undecided_fraction() const;
    std::vector<std::size_t> component_histogram() const;  // [p components, escaped, undecided]
};

ClassGrid render_grid(const ExpMapConfig& cfg, const AttractingCycle& cycle, const GridSpec& spec,
                      int threads = 0);

using PixelSet = std::vector<std::pair<int, int>>;  // (col, row), scan order

// Pixels of the given basin phase with a 4-neighbor of any other
// classification; Undecided neighbors count as different. Off-grid
// neighbors do not.
PixelSet extract_boundary(const ClassGrid& grid, int phase);

// Boundary of the single basin component containing seed (pixel-level
// 4-connected flood fill over the seed's phase). This is the surrogate for
// the boundary of one component U, as opposed to the whole phase union.
PixelSet extract_component_boundary(const ClassGrid& grid, const cplx& seed);

// Union of all phase boundaries plus every Undecided pixel.
PixelSet whole_julia_surrogate(const ClassGrid& grid);

struct BoxCount {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<int, std::size_t>> counts;  // (box size px, boxes hit)
};

inline const std::vector<int> kDefaultBoxScales{1, 2, 4, 8, 16, 32};

// Least-squares slope of log N(eps) against log(1/eps). Requires >= 1000
// points and >= 4 scales spanning at least two octaves.
BoxCount box_count(const PixelSet& points, const GridSpec& spec,
                   const std::vector<int>& scales = kDefaultBoxScales);

// One gray level per class tag: undecided 0, escaped 255, components spread
// over mid grays.
std::vector<std::uint8_t> grid_to_gray(const ClassGrid& grid);

}  // namespace expbasin
