#pragma once

#include <string>

#include "gridfast/grid.hpp"

namespace gridfast {

// Metadata sidecar for a PGM map. Field-compatible with the common robotics
// map-server format; thresholds are 8-bit pixel values.
struct MapMeta {
    std::string image;
    double resolution = 0.05;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double origin_yaw = 0.0;
    int negate = 0;
    int free_threshold = 250;      // pixel >= free_threshold  -> free
    int occupied_threshold = 50;   // pixel <= occupied_threshold -> occupied
};

MapMeta read_map_meta(const std::string& meta_path);
void write_map_meta(const std::string& meta_path, const MapMeta& meta);

// Loads an 8-bit grayscale PGM (P2 or P5) plus its metadata sidecar.
// Throws std::runtime_error on malformed headers or missing metadata and
// std::invalid_argument on a non-positive resolution.
OccupancyGrid load_map(const std::string& image_path,
                       const std::string& meta_path);

// Re-exports a grid as PGM (free=254, unknown=205, occupied=0) + sidecar.
// load_map(save_map(g)) reproduces g's cell states exactly.
void save_map(const std::string& image_path, const std::string& meta_path,
              const OccupancyGrid& grid);

}  // namespace gridfast
