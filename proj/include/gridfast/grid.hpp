#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridfast/geometry.hpp"

namespace gridfast {

// Ternary cell state. Serialized as -1 / 0 / 1.
enum class CellState : int8_t { unknown = -1, free = 0, occupied = 1 };

// 2D occupancy lattice with metric resolution and world origin.
// Cells outside the lattice read as unknown; all queries are const and the
// grid is safe to share across threads once built.
struct OccupancyGrid {
    int rows = 0;
    int cols = 0;
    double resolution = 0.05;  // meters per cell, > 0
    double origin_x = 0.0;     // world x of the (0,0) cell corner, meters
    double origin_y = 0.0;
    double origin_yaw = 0.0;
    std::vector<CellState> cells;  // row-major, rows*cols

    static OccupancyGrid filled(int rows, int cols, CellState s,
                                double resolution = 0.05);

    bool in_bounds(int r, int c) const {
        return r >= 0 && r < rows && c >= 0 && c < cols;
    }
    bool in_bounds(const Cell& c) const { return in_bounds(c.row, c.col); }

    CellState at(int r, int c) const {
        return in_bounds(r, c) ? cells[size_t(r) * cols + c]
                               : CellState::unknown;
    }
    CellState at(const Cell& c) const { return at(c.row, c.col); }

    void set(int r, int c, CellState s) {
        if (in_bounds(r, c)) cells[size_t(r) * cols + c] = s;
    }
    void set(const Cell& c, CellState s) { set(c.row, c.col, s); }

    bool is_free(const Cell& c) const { return at(c) == CellState::free; }

    // World coordinates (meters) of a cell center.
    Vec2 world(const Cell& c) const;
    // World coordinates of a continuous cell-space point.
    Vec2 world_point(const Vec2& p) const;
    // Continuous cell coordinates for a world point.
    Vec2 from_world(const Vec2& w) const;
};

// Robot working diameter in meters.
struct RobotSpec {
    double r_min = 0.6;
};

// Minimum traversable gap span in cells: ceil(r_min / resolution), >= 1.
int min_gap_cells(const RobotSpec& robot, const OccupancyGrid& grid);

// One scan direction. theta = angle_index * pi / n_dir; the transforms map
// continuous cell coordinates between the original and rotated frames.
struct ScanFrame {
    int angle_index = 0;
    int n_dir = 1;
    double theta = 0.0;
    double cos_t = 1.0;
    double sin_t = 0.0;
    Vec2 src_center;
    Vec2 dst_center;
    int out_rows = 0;
    int out_cols = 0;

    Vec2 to_rotated(const Vec2& p) const {
        Vec2 d = p - src_center;
        return Vec2{cos_t * d.x - sin_t * d.y, sin_t * d.x + cos_t * d.y} +
               dst_center;
    }
    Vec2 to_original(const Vec2& p) const {
        Vec2 d = p - dst_center;
        return Vec2{cos_t * d.x + sin_t * d.y, -sin_t * d.x + cos_t * d.y} +
               src_center;
    }
};

ScanFrame make_scan_frame(const OccupancyGrid& grid, int angle_index,
                          int n_dir);

// 8-neighborhood offsets, row/col.
inline constexpr int kNbr8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                    {0, 1},  {1, -1}, {1, 0},  {1, 1}};
inline constexpr int kNbr4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

bool has_neighbor8(const OccupancyGrid& grid, const Cell& c, CellState s);
bool has_neighbor4(const OccupancyGrid& grid, const Cell& c, CellState s);

// Boundary free cell: free with at least one non-free 8-neighbor
// (out-of-bounds counts as unknown).
bool is_boundary_free(const OccupancyGrid& grid, const Cell& c);

}  // namespace gridfast
