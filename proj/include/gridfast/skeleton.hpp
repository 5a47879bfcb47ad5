#pragma once

#include <vector>

#include "gridfast/kernels.hpp"
#include "gridfast/regions.hpp"

namespace gridfast {

enum class AnchorKind {
    opening,
    intersection_center,
    dead_end_tip,
    frontier_tip,
    endpoint
};

// Robot path through one region, cell coordinates. End points are shared
// anchor coordinates: polylines meeting at an opening carry bit-identical
// end points.
struct Polyline {
    std::vector<Vec2> pts;
    int region = -1;
    AnchorKind kind_front = AnchorKind::endpoint;
    AnchorKind kind_back = AnchorKind::endpoint;
    // Sub-segments emitted on a passed ray check, kept for re-validation.
    std::vector<std::pair<Vec2, Vec2>> straight_segments;

    double length() const {
        double acc = 0;
        for (size_t i = 0; i + 1 < pts.size(); ++i) acc += dist(pts[i], pts[i + 1]);
        return acc;
    }
};

struct Skeleton {
    std::vector<Polyline> paths;
};

// Three-ray obstruction test: the segment a-b and its two parallels offset
// by half the robot diameter must stay clear of walls and non-free cells.
bool ray_clear(const Vec2& a, const Vec2& b, double r_min_cells,
               const OccupancyGrid& grid, const WallSet& walls);

// Thinning-based local skeleton of an area. Interior holes are filled
// before thinning; locked cells are never deleted.
std::vector<Cell> thin_region(const std::vector<Cell>& area,
                              const std::vector<Cell>& locked,
                              kernels::Exec exec = kernels::Exec::parallel);

// Canonical free-cell-center midpoint of an opening.
Vec2 opening_anchor_point(const OpeningDetection& o, const OccupancyGrid& grid);

// Routes every region and assembles the skeleton: pathways connect their
// two opening midpoints, intersections connect each opening midpoint to the
// centroid, dead ends keep the longest thinned branch from their opening.
Skeleton build_skeleton(const RegionBuildResult& regions,
                        const OccupancyGrid& grid, const WallSet& walls,
                        const RobotSpec& robot,
                        kernels::Exec exec = kernels::Exec::parallel);

}  // namespace gridfast
