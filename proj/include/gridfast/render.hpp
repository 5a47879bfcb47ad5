#pragma once

#include <string>

#include "gridfast/regions.hpp"
#include "gridfast/skeleton.hpp"

namespace gridfast {

// PNG render of a grid, optionally tinted by region class with skeleton
// polylines drawn in red.
void render(const std::string& path, const OccupancyGrid& grid,
            const RegionBuildResult* regions = nullptr,
            const Skeleton* skeleton = nullptr);

}  // namespace gridfast
