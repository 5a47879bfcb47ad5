#pragma once

#include <unordered_map>
#include <vector>

#include "gridfast/regions.hpp"

namespace gridfast {

struct OptConfig {
    double d_c_min_m = 0.6;  // penalty knee, meters
    double d_max = 1e6;      // penalty at distance zero
    int d_s = 5;             // step hysteresis for dead-end facing openings
};

// Piecewise penalty on the opening-midpoint-to-centroid distance: linear
// descent from d_max to 0 at d_c_min_m, then linear growth.
double penalty(double x_m, const OptConfig& cfg);

// Sum over the region's openings of opening length plus the distance
// penalty against the region centroid, in meters.
double intersection_cost(const RegionFace& face,
                         const std::vector<OpeningDetection>& openings,
                         const OccupancyGrid& grid, const OptConfig& cfg);

struct GrowTraceRow {
    int face = -1;
    int opening = -1;
    int i = 0;
    int j = 0;
    double d = 0.0;
    double score = 0.0;
    bool accepted = false;
};

struct OptimizeStats {
    int removed_openings = 0;
    int removed_intersections = 0;
    int reoptimizations = 0;
};

// The wall cells an opening end may slide over, outward from the current
// anchor (index 0 = current position).
struct GrowRuns {
    std::vector<WallAnchor> ws;  // exit-side, outward
    std::vector<WallAnchor> we;  // entry-side, outward
    bool dead_end = false;       // runs were halved at a self loop
};

// Per-intersection two-phase optimizer. All other intersections stay static
// while one is processed; openings move along their walls only.
class Optimizer {
public:
    Optimizer(const OccupancyGrid& grid, const WallSet& walls,
              const std::vector<Frontier>& frontiers, const RobotSpec& robot,
              const OptConfig& cfg, std::vector<OpeningDetection>& openings,
              std::vector<GrowTraceRow>* trace = nullptr);

    void set_dead_end_openings(const std::vector<int>& opening_ids);

    // One pairwise sweep moving each adjacent anchor pair to the argmin
    // corner cell. Returns true when any anchor moved.
    bool shrink_face(RegionFace& face);

    // Outward growth of every opening of the face against the frozen
    // centroid. Returns ids of openings removed for want of a feasible
    // position.
    std::vector<int> grow_face(const RegionFace& face, const Vec2& centroid);

    GrowRuns grow_runs(const RegionFace& face, int k) const;
    bool feasible(int opening_id, const Cell& a, const Cell& b) const;
    bool active(int opening_id) const { return active_[opening_id] != 0; }
    void deactivate(int opening_id);
    // Another active opening anchored on one of this opening's cells.
    bool shares_anchor_cell(int opening_id) const;
    void place_anchors(int opening_id, const WallAnchor& first,
                       const WallAnchor& second);
    const AnchorIndex& index() const { return index_; }
    const std::vector<uint8_t>& active_flags() const { return active_; }
    bool is_dead_end_facing(int opening_id) const {
        return dead_end_facing_[opening_id] != 0;
    }

private:
    std::vector<WallAnchor> extend(const WallAnchor& from, int dir,
                                   int self_opening, bool& self_loop) const;
    void move_anchor(int opening_id, int end, const WallAnchor& to);
    void gather_nearby(const Cell& a, const Cell& b,
                       std::vector<int>& out) const;

    const OccupancyGrid& grid_;
    const WallSet& walls_;
    const std::vector<Frontier>& frontiers_;
    double r_min_cells_;
    OptConfig cfg_;
    std::vector<OpeningDetection>& openings_;
    std::vector<uint8_t> active_;
    std::vector<uint8_t> dead_end_facing_;
    std::vector<uint8_t> frontier_mask_;
    std::vector<GrowTraceRow>* trace_;
    const RegionFace* current_face_ = nullptr;

    AnchorIndex index_;
    std::unordered_map<Cell, std::vector<int>, CellHash> anchor_cells_;
    // Coarse spatial buckets over opening segments for overlap tests.
    static constexpr int kBucket = 32;
    std::unordered_map<int64_t, std::vector<int>> buckets_;
    std::vector<std::vector<int64_t>> bucket_keys_;
    void bucket_insert(int opening_id);
    void bucket_erase(int opening_id);
};

// Optimizes every intersection in centroid order (row, then column), then
// rebuilds all regions from the surviving openings.
OptimizeStats optimize_all(RegionBuildResult& regions, const OccupancyGrid& grid,
                           const WallSet& walls,
                           const std::vector<Frontier>& frontiers,
                           const RobotSpec& robot, const OptConfig& cfg,
                           std::vector<GrowTraceRow>* trace = nullptr);

}  // namespace gridfast
