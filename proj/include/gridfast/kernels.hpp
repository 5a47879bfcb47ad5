#pragma once

#include <cstdint>
#include <vector>

#include "gridfast/grid.hpp"

namespace gridfast::kernels {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; results are identical between the two.
enum class Exec { serial, parallel };

// Rotated copy of a grid plus a footprint mask. Cells of the rotated lattice
// that fall outside the source footprint read unknown and are flagged
// exterior so later stages can tell map content from padding.
struct RotatedGrid {
    OccupancyGrid grid;
    ScanFrame frame;
    std::vector<uint8_t> interior;  // 1 = maps back inside the source lattice

    bool is_interior(int r, int c) const {
        return r >= 0 && r < grid.rows && c >= 0 && c < grid.cols &&
               interior[size_t(r) * grid.cols + c];
    }
};

// Nearest-neighbor resampling onto the rotated bounding lattice. Exact for
// multiples of 90 degrees.
RotatedGrid rotate_grid(const OccupancyGrid& grid, const ScanFrame& frame,
                        Exec exec = Exec::parallel);

// One thinning subiteration (two-subcycle scheme, pass = 0 or 1) over a
// binary mask. Cells flagged in `locked` are never deleted. Returns the
// number of deleted cells. Deletions are computed against a snapshot, so
// the result is schedule independent.
int thin_pass(std::vector<uint8_t>& mask, int rows, int cols, int pass,
              const std::vector<uint8_t>& locked, Exec exec = Exec::parallel);

// Full thinning to a (near) unit-width skeleton.
void thin_mask(std::vector<uint8_t>& mask, int rows, int cols,
               const std::vector<uint8_t>& locked, Exec exec = Exec::parallel);

}  // namespace gridfast::kernels
