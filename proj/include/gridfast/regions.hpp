#pragma once

#include <set>
#include <vector>

#include "gridfast/openings.hpp"
#include "gridfast/walls.hpp"

namespace gridfast {

enum class RegionClass { intersection, pathway, dead_end, frontier_path };

// Inclusive cyclic wall index range, walked in +1 direction.
struct WallRun {
    int wall = -1;
    int begin = 0;
    int end = 0;
    bool full = false;  // the run wraps the entire wall
};

std::vector<Cell> run_cells(const WallSet& walls, const WallRun& run);

// Directed pass over an opening: forward enters at `first`, exits `second`.
struct Crossing {
    int opening = -1;
    bool forward = true;
    bool operator==(const Crossing& o) const {
        return opening == o.opening && forward == o.forward;
    }
};

// One region: a closed boundary loop alternating opening crossings and wall
// runs, plus the enclosed free cells (wall rim included, opening strips
// excluded).
struct RegionFace {
    int id = -1;
    RegionClass cls = RegionClass::pathway;
    std::vector<Crossing> crossings;
    std::vector<WallRun> wall_runs;  // wall_runs[k] follows crossings[k]
    std::vector<Cell> area;
    Vec2 centroid;

    bool has_opening(int id_) const {
        for (const Crossing& c : crossings)
            if (c.opening == id_) return true;
        return false;
    }
};

struct RegionBuildResult {
    std::vector<OpeningDetection> openings;  // surviving, ids reindexed
    std::vector<RegionFace> intersections;
    std::vector<RegionFace> pathways;  // pathway / dead_end / frontier_path
};

// Anchor of one opening end on a wall, ordered by wall position.
struct AnchorEntry {
    int index = 0;
    int opening = -1;
    int end = 0;  // 0 = first, 1 = second
    bool operator<(const AnchorEntry& o) const {
        if (index != o.index) return index < o.index;
        if (opening != o.opening) return opening < o.opening;
        return end < o.end;
    }
    bool operator==(const AnchorEntry& o) const {
        return index == o.index && opening == o.opening && end == o.end;
    }
};

// Per-wall ordered anchor sets; supports incremental moves so region walks
// stay cheap while openings slide along walls.
class AnchorIndex {
public:
    AnchorIndex() = default;
    AnchorIndex(const WallSet& walls, const std::vector<OpeningDetection>& ops,
                const std::vector<uint8_t>& active);

    void insert(const OpeningDetection& o, int end);
    void erase(const OpeningDetection& o, int end);
    // Next anchor strictly after `e` in cyclic wall order.
    AnchorEntry next_after(int wall, const AnchorEntry& e) const;
    size_t count(int wall) const { return per_wall_[wall].size(); }

private:
    std::vector<std::set<AnchorEntry>> per_wall_;
};

// 1-cell rasterization of the opening segment, end cells excluded.
std::vector<Cell> opening_strip(const OpeningDetection& o);

// Walks every region loop: openings whose two faces both have fewer than
// three openings are noise cuts and get removed (frontier openings are
// exempt), faces with three or more openings that include a detected
// opening become intersections, the rest classify per their crossings.
// Throws std::runtime_error when a walk fails to close.
RegionBuildResult build_regions(const OccupancyGrid& grid, const WallSet& walls,
                                const std::vector<Frontier>& frontiers,
                                std::vector<OpeningDetection> openings);

// Brute-force region oracle: area cells free; every 4-neighbor of an area
// cell is in-area, occupied, or in exactly one of the region's opening
// strips; strips pairwise non-touching; no complete wall loop inside.
bool validate_region(const RegionFace& region,
                     const std::vector<OpeningDetection>& openings,
                     const OccupancyGrid& grid, const WallSet& walls);

// Re-walks the face containing `seed` against the current opening anchors
// and refills its area.
RegionFace rewalk_face(const OccupancyGrid& grid, const WallSet& walls,
                       const std::vector<OpeningDetection>& openings,
                       const AnchorIndex& index, Crossing seed);

}  // namespace gridfast
