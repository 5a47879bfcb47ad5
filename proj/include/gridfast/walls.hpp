#pragma once

#include <unordered_map>
#include <vector>

#include "gridfast/gaps.hpp"
#include "gridfast/grid.hpp"

namespace gridfast {

// Cyclic boundary trace of free space: every cell is free with at least one
// occupied-or-unknown 8-neighbor, consecutive cells (last to first included)
// are 8-adjacent.
struct Wall {
    int id = -1;
    std::vector<Cell> cells;
    double signed_area = 0.0;
    bool inner = false;  // loop around an obstacle (no free interior)
};

// Position of a cell on a wall.
struct WallAnchor {
    int wall = -1;
    int index = -1;
    bool valid() const { return wall >= 0; }
};

struct WallSet {
    std::vector<Wall> walls;
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> mask;  // 1 where some wall passes through
    std::unordered_map<Cell, WallAnchor, CellHash> anchor_of;

    bool is_wall(const Cell& c) const {
        return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols &&
               mask[size_t(c.row) * cols + c.col];
    }
    // Nearest wall cell within `radius` (Euclidean, deterministic ties).
    WallAnchor nearest(const Cell& c, double radius) const;
    void rebuild_index();
};

// Traces every boundary loop reachable from the end points of detection
// member gaps. Plain convex rooms with no detections yield no walls.
WallSet trace_walls(const OccupancyGrid& grid,
                    const std::vector<MemberGap>& members);

// Scanline fill of the cells enclosed by a cyclic cell loop (loop cells
// excluded from the result).
std::vector<Cell> fill_loop_interior(const std::vector<Cell>& loop);

struct ObjectFilterStats {
    int removed_walls = 0;
    int filled_cells = 0;
    int dropped_members = 0;
};

// Removes enclosed obstacles whose wall has fewer than f_obj cells with an
// occupied 8-neighbor: the interior is filled free, the wall is dropped and
// detection members touching it are discarded (detections reduced below two
// members dissolve).
ObjectFilterStats remove_small_objects(OccupancyGrid& grid, WallSet& walls,
                                       std::vector<MemberGap>& members,
                                       int f_obj);

// Contiguous wall span whose cells all touch unknown space, at least r_min
// long end to end.
struct Frontier {
    int id = -1;
    int wall = -1;
    int begin = 0;  // cyclic index range [begin..end] walking +1
    int end = 0;
    std::vector<Cell> span;
};

std::vector<Frontier> detect_frontiers(const WallSet& walls,
                                       const RobotSpec& robot,
                                       const OccupancyGrid& grid);

}  // namespace gridfast
