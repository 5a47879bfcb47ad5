#include "gridfast/render.hpp"

#include "png_writer.hpp"

namespace gridfast {

namespace {

struct Rgb {
    uint8_t r, g, b;
};

constexpr Rgb kFree{255, 255, 255};
constexpr Rgb kUnknown{205, 205, 205};
constexpr Rgb kOccupied{35, 35, 35};
constexpr Rgb kIntersection{106, 176, 76};
constexpr Rgb kPathway{74, 105, 189};
constexpr Rgb kDeadEnd{240, 147, 43};
constexpr Rgb kFrontierPath{155, 89, 182};
constexpr Rgb kOpening{34, 166, 179};
constexpr Rgb kSkeleton{224, 30, 30};

Rgb blend(Rgb base, Rgb tint, double alpha) {
    auto mix = [&](uint8_t a, uint8_t b) {
        return uint8_t(a * (1.0 - alpha) + b * alpha);
    };
    return {mix(base.r, tint.r), mix(base.g, tint.g), mix(base.b, tint.b)};
}

Rgb class_color(RegionClass c) {
    switch (c) {
        case RegionClass::intersection: return kIntersection;
        case RegionClass::pathway: return kPathway;
        case RegionClass::dead_end: return kDeadEnd;
        default: return kFrontierPath;
    }
}

}  // namespace

void render(const std::string& path, const OccupancyGrid& grid,
            const RegionBuildResult* regions, const Skeleton* skeleton) {
    std::vector<uint8_t> rgb(size_t(grid.rows) * grid.cols * 3);
    auto put = [&](const Cell& c, Rgb color) {
        if (!grid.in_bounds(c)) return;
        size_t k = (size_t(c.row) * grid.cols + c.col) * 3;
        rgb[k] = color.r;
        rgb[k + 1] = color.g;
        rgb[k + 2] = color.b;
    };
    auto get = [&](const Cell& c) {
        size_t k = (size_t(c.row) * grid.cols + c.col) * 3;
        return Rgb{rgb[k], rgb[k + 1], rgb[k + 2]};
    };

    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c) {
            Rgb color = kUnknown;
            if (grid.at(r, c) == CellState::free) color = kFree;
            if (grid.at(r, c) == CellState::occupied) color = kOccupied;
            put({r, c}, color);
        }

    if (regions) {
        auto tint_face = [&](const RegionFace& f) {
            Rgb tint = class_color(f.cls);
            for (const Cell& c : f.area) put(c, blend(get(c), tint, 0.55));
        };
        for (const RegionFace& f : regions->intersections) tint_face(f);
        for (const RegionFace& f : regions->pathways) tint_face(f);
        for (const OpeningDetection& o : regions->openings)
            for (const Cell& c : opening_strip(o))
                put(c, blend(get(c), kOpening, 0.7));
    }

    if (skeleton) {
        for (const Polyline& pl : skeleton->paths)
            for (size_t i = 0; i + 1 < pl.pts.size(); ++i)
                for (const Cell& c : supercover_line(pl.pts[i], pl.pts[i + 1]))
                    put(c, kSkeleton);
    }

    write_png_rgb(path, rgb, grid.cols, grid.rows);
}

}  // namespace gridfast
