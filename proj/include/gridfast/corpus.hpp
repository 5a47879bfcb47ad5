#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridfast/grid.hpp"

namespace gridfast {

enum class MapKind {
    cross,
    t_junction,
    corridor,
    dead_end_stub,
    ring,
    maze,
    cluttered_open
};

MapKind map_kind_from_name(const std::string& name);
std::string map_kind_name(MapKind kind);

// Deterministic synthetic map recipe; the seed fully determines the output.
struct MapRecipe {
    MapKind kind = MapKind::cross;
    int rows = 100;
    int cols = 100;
    int corridor_width = 10;
    uint64_t seed = 1;
    double noise = 0.0;  // flip probability per boundary free cell
    double resolution = 0.1;
};

// Analytically known region counts for the structured recipes.
struct GroundTruth {
    bool known = false;
    int intersections = 0;
    int intersection_openings = 0;  // openings of the single intersection
    int pathways = 0;
    int dead_ends = 0;
    int frontier_paths = 0;
};

struct CorpusMap {
    std::string name;
    MapRecipe recipe;
    GroundTruth truth;
};

OccupancyGrid generate(const MapRecipe& recipe);

// The standard test corpus.
std::vector<CorpusMap> corpus();

// Recipe parsing from `key = value` lines (kind, rows, cols, width, seed,
// noise, resolution).
MapRecipe parse_recipe(const std::string& text);

}  // namespace gridfast
