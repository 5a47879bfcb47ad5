#pragma once

#include <string>

#include "gridfast/corpus.hpp"
#include "gridfast/gaps.hpp"
#include "gridfast/graph.hpp"
#include "gridfast/optimize.hpp"

namespace gridfast {

// Full pipeline parameters; defaults match the tuned values.
struct PipelineConfig {
    RobotSpec robot{0.6};
    int n_dir = 4;
    int f_uk = 3;
    int f_obj = 20;
    int d_s = 5;
    double d_max = 1e6;
    double d_c_min_m = -1.0;  // negative: use robot.r_min
    kernels::Exec exec = kernels::Exec::parallel;

    OptConfig opt_config() const {
        OptConfig c;
        c.d_c_min_m = d_c_min_m > 0 ? d_c_min_m : robot.r_min;
        c.d_max = d_max;
        c.d_s = d_s;
        return c;
    }
};

struct PipelineTimings {
    double topometric_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineResult {
    OccupancyGrid filtered;
    std::vector<MemberGap> members;
    WallSet walls;
    std::vector<Frontier> frontiers;
    RegionBuildResult regions;
    Skeleton skeleton;
    TopoGraph graph;
    PipelineTimings timings;
    OpeningDebugCounts opening_debug;
    OptimizeStats opt_stats;
    int filter_iterations = 0;
    int filtered_cells = 0;
};

// Runs scan/filter, walls, openings, regions and optimization; with
// `with_topology` also the skeleton and graph. File I/O happens outside.
PipelineResult run_pipeline(const OccupancyGrid& input,
                            const PipelineConfig& cfg,
                            bool with_topology = true);

// Region export: class, centroid and opening end points in meters, area as
// run-length encoded cell rows.
std::string topometric_to_json(const PipelineResult& result);

// Debug dumps.
std::string members_debug_jsonl(const PipelineResult& result);
std::string walls_debug_json(const PipelineResult& result);
std::string openings_debug_json(const PipelineResult& result);

}  // namespace gridfast
