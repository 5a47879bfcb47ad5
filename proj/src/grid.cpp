#include "gridfast/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridfast {

std::vector<Cell> supercover_line(Vec2 a, Vec2 b) {
    std::vector<Cell> out;
    Cell ca = point_cell(a), cb = point_cell(b);
    out.push_back(ca);
    if (ca == cb) return out;

    double dx = b.x - a.x, dy = b.y - a.y;
    int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
    // Parametric distance to the next vertical / horizontal cell border.
    double tx = dx != 0
                    ? ((dx > 0 ? std::floor(a.x) + 1 - a.x : a.x - std::floor(a.x)) /
                       std::abs(dx))
                    : 2.0;
    double ty = dy != 0
                    ? ((dy > 0 ? std::floor(a.y) + 1 - a.y : a.y - std::floor(a.y)) /
                       std::abs(dy))
                    : 2.0;
    if (a.x == std::floor(a.x) && dx < 0) tx = 0;
    if (a.y == std::floor(a.y) && dy < 0) ty = 0;
    double ddx = dx != 0 ? 1.0 / std::abs(dx) : 2.0;
    double ddy = dy != 0 ? 1.0 / std::abs(dy) : 2.0;

    Cell cur = ca;
    int guard = 4 * (std::abs(cb.row - ca.row) + std::abs(cb.col - ca.col)) + 8;
    while (cur != cb && guard-- > 0) {
        if (tx <= ty) {
            cur.col += sx;
            tx += ddx;
        } else {
            cur.row += sy;
            ty += ddy;
        }
        out.push_back(cur);
    }
    return out;
}

namespace {
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    double v = (b - a).cross(c - a);
    const double eps = 1e-12;
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
}
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}
}  // namespace

bool segments_intersect(const Vec2& a1, const Vec2& b1, const Vec2& a2,
                        const Vec2& b2) {
    int o1 = orient(a1, b1, a2);
    int o2 = orient(a1, b1, b2);
    int o3 = orient(a2, b2, a1);
    int o4 = orient(a2, b2, b1);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a1, b1, a2)) return true;
    if (o2 == 0 && on_segment(a1, b1, b2)) return true;
    if (o3 == 0 && on_segment(a2, b2, a1)) return true;
    if (o4 == 0 && on_segment(a2, b2, b1)) return true;
    return false;
}

double loop_signed_area(const std::vector<Cell>& loop) {
    double acc = 0.0;
    size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = cell_center(loop[i]);
        Vec2 b = cell_center(loop[(i + 1) % n]);
        acc += a.cross(b);
    }
    return acc * 0.5;
}

OccupancyGrid OccupancyGrid::filled(int rows, int cols, CellState s,
                                    double resolution) {
    OccupancyGrid g;
    g.rows = rows;
    g.cols = cols;
    g.resolution = resolution;
    g.cells.assign(size_t(rows) * cols, s);
    return g;
}

Vec2 OccupancyGrid::world(const Cell& c) const {
    return world_point({c.col + 0.5, c.row + 0.5});
}

Vec2 OccupancyGrid::world_point(const Vec2& p) const {
    double lx = p.x * resolution;
    double ly = p.y * resolution;
    double cy = std::cos(origin_yaw), sy = std::sin(origin_yaw);
    return {origin_x + cy * lx - sy * ly, origin_y + sy * lx + cy * ly};
}

Vec2 OccupancyGrid::from_world(const Vec2& w) const {
    double dx = w.x - origin_x, dy = w.y - origin_y;
    double cy = std::cos(origin_yaw), sy = std::sin(origin_yaw);
    double lx = cy * dx + sy * dy;
    double ly = -sy * dx + cy * dy;
    return {lx / resolution, ly / resolution};
}

int min_gap_cells(const RobotSpec& robot, const OccupancyGrid& grid) {
    if (grid.resolution <= 0.0)
        throw std::invalid_argument("grid resolution must be positive");
    if (robot.r_min <= 0.0)
        throw std::invalid_argument("robot diameter must be positive");
    int g = int(std::ceil(robot.r_min / grid.resolution));
    return std::max(g, 1);
}

ScanFrame make_scan_frame(const OccupancyGrid& grid, int angle_index,
                          int n_dir) {
    if (n_dir < 1) throw std::invalid_argument("n_dir must be >= 1");
    ScanFrame f;
    f.angle_index = angle_index;
    f.n_dir = n_dir;
    f.theta = double(angle_index) * M_PI / double(n_dir);
    f.cos_t = std::cos(f.theta);
    f.sin_t = std::sin(f.theta);
    // Keep right angles exact so ternary states survive resampling.
    if (std::abs(f.cos_t) < 1e-12) f.cos_t = 0.0;
    if (std::abs(f.sin_t) < 1e-12) f.sin_t = 0.0;
    if (std::abs(f.cos_t - 1.0) < 1e-12) f.cos_t = 1.0;
    if (std::abs(f.sin_t - 1.0) < 1e-12) f.sin_t = 1.0;

    double w = grid.cols, h = grid.rows;
    double ac = std::abs(f.cos_t), as = std::abs(f.sin_t);
    f.out_cols = std::max(1, int(std::ceil(w * ac + h * as - 1e-9)));
    f.out_rows = std::max(1, int(std::ceil(w * as + h * ac - 1e-9)));
    f.src_center = {w / 2.0, h / 2.0};
    f.dst_center = {f.out_cols / 2.0, f.out_rows / 2.0};
    return f;
}

bool has_neighbor8(const OccupancyGrid& grid, const Cell& c, CellState s) {
    for (auto& d : kNbr8)
        if (grid.at(c.row + d[0], c.col + d[1]) == s) return true;
    return false;
}

bool has_neighbor4(const OccupancyGrid& grid, const Cell& c, CellState s) {
    for (auto& d : kNbr4)
        if (grid.at(c.row + d[0], c.col + d[1]) == s) return true;
    return false;
}

bool is_boundary_free(const OccupancyGrid& grid, const Cell& c) {
    if (grid.at(c) != CellState::free) return false;
    for (auto& d : kNbr8)
        if (grid.at(c.row + d[0], c.col + d[1]) != CellState::free) return true;
    return false;
}

}  // namespace gridfast
