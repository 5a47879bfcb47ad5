#include "gridfast/skeleton.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gridfast {

bool ray_clear(const Vec2& a, const Vec2& b, double r_min_cells,
               const OccupancyGrid& grid, const WallSet& walls) {
    Vec2 d = b - a;
    double len = d.norm();
    if (len < 1e-9) return true;
    Vec2 n{-d.y / len, d.x / len};
    double off = r_min_cells / 2.0;
    for (double s : {0.0, off, -off}) {
        Vec2 oa = a + n * s, ob = b + n * s;
        for (const Cell& c : supercover_line(oa, ob)) {
            if (grid.at(c) != CellState::free) return false;
            if (walls.is_wall(c)) return false;
        }
    }
    return true;
}

namespace {

struct MaskView {
    int r0 = 0, c0 = 0, rows = 0, cols = 0;
    std::vector<uint8_t> mask;
    bool at(const Cell& c) const {
        int r = c.row - r0, cc = c.col - c0;
        return r >= 0 && r < rows && cc >= 0 && cc < cols &&
               mask[size_t(r) * cols + cc];
    }
};

}  // namespace

std::vector<Cell> thin_region(const std::vector<Cell>& area,
                              const std::vector<Cell>& locked,
                              kernels::Exec exec) {
    std::vector<Cell> out;
    if (area.empty()) return out;
    int rmin = area[0].row, rmax = area[0].row, cmin = area[0].col,
        cmax = area[0].col;
    for (const Cell& c : area) {
        rmin = std::min(rmin, c.row);
        rmax = std::max(rmax, c.row);
        cmin = std::min(cmin, c.col);
        cmax = std::max(cmax, c.col);
    }
    for (const Cell& c : locked) {
        rmin = std::min(rmin, c.row);
        rmax = std::max(rmax, c.row);
        cmin = std::min(cmin, c.col);
        cmax = std::max(cmax, c.col);
    }
    int rows = rmax - rmin + 3, cols = cmax - cmin + 3;
    int r0 = rmin - 1, c0 = cmin - 1;
    std::vector<uint8_t> mask(size_t(rows) * cols, 0);
    auto idx = [&](const Cell& c) {
        return size_t(c.row - r0) * cols + (c.col - c0);
    };
    for (const Cell& c : area) mask[idx(c)] = 1;
    for (const Cell& c : locked) mask[idx(c)] = 1;

    // Fill interior holes: whatever the outside flood cannot reach is a
    // hole and becomes part of the thinning domain.
    {
        std::vector<uint8_t> outside(mask.size(), 0);
        std::queue<int> q;
        auto push = [&](int r, int c) {
            if (r < 0 || r >= rows || c < 0 || c >= cols) return;
            size_t k = size_t(r) * cols + c;
            if (outside[k] || mask[k]) return;
            outside[k] = 1;
            q.push(int(k));
        };
        for (int r = 0; r < rows; ++r) {
            push(r, 0);
            push(r, cols - 1);
        }
        for (int c = 0; c < cols; ++c) {
            push(0, c);
            push(rows - 1, c);
        }
        while (!q.empty()) {
            int k = q.front();
            q.pop();
            int r = k / cols, c = k % cols;
            push(r - 1, c);
            push(r + 1, c);
            push(r, c - 1);
            push(r, c + 1);
        }
        for (size_t k = 0; k < mask.size(); ++k)
            if (!mask[k] && !outside[k]) mask[k] = 1;
    }

    std::vector<uint8_t> lock_mask(mask.size(), 0);
    for (const Cell& c : locked) lock_mask[idx(c)] = 1;
    kernels::thin_mask(mask, rows, cols, lock_mask, exec);

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (mask[size_t(r) * cols + c])
                out.push_back(Cell{r + r0, c + c0});
    return out;
}

Vec2 opening_anchor_point(const OpeningDetection& o, const OccupancyGrid& grid) {
    Vec2 mid = o.midpoint();
    Cell c = point_cell(mid);
    if (grid.is_free(c)) return cell_center(c);
    for (int radius = 1; radius <= 4; ++radius) {
        Cell best{-1, -1};
        double best_d = std::numeric_limits<double>::max();
        for (int dr = -radius; dr <= radius; ++dr)
            for (int dc = -radius; dc <= radius; ++dc) {
                Cell n{c.row + dr, c.col + dc};
                if (!grid.is_free(n)) continue;
                double d = dist(cell_center(n), mid);
                if (d < best_d - 1e-12) {
                    best_d = d;
                    best = n;
                }
            }
        if (best.row >= 0) return cell_center(best);
    }
    return cell_center(c);
}

namespace {

const int kStep8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                          {0, 1},  {1, -1}, {1, 0},  {1, 1}};

// Shortest free-space path, used when a degenerate region's local skeleton
// failed to connect its anchors.
std::vector<Cell> free_path(const OccupancyGrid& grid, const Cell& from,
                            const Cell& to) {
    if (!grid.is_free(from) || !grid.is_free(to)) return {};
    std::unordered_map<Cell, Cell, CellHash> parent;
    std::queue<Cell> q;
    q.push(from);
    parent[from] = from;
    while (!q.empty() && !parent.count(to)) {
        Cell c = q.front();
        q.pop();
        for (auto& d : kNbr4) {
            Cell n{c.row + d[0], c.col + d[1]};
            if (!grid.is_free(n) || parent.count(n)) continue;
            parent[n] = c;
            q.push(n);
        }
    }
    if (!parent.count(to)) return {};
    std::vector<Cell> path;
    for (Cell c = to;; c = parent[c]) {
        path.push_back(c);
        if (c == parent[c]) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Shortest cell path over a skeleton cell set, 8-connected.
std::vector<Cell> skeleton_path(const std::vector<Cell>& skel, const Cell& from,
                                const Cell& to) {
    std::unordered_set<Cell, CellHash> cells(skel.begin(), skel.end());
    if (!cells.count(from) || !cells.count(to)) return {};
    std::unordered_map<Cell, Cell, CellHash> parent;
    std::queue<Cell> q;
    q.push(from);
    parent[from] = from;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        if (c == to) break;
        for (auto& d : kStep8) {
            Cell n{c.row + d[0], c.col + d[1]};
            if (!cells.count(n) || parent.count(n)) continue;
            parent[n] = c;
            q.push(n);
        }
    }
    if (!parent.count(to)) return {};
    std::vector<Cell> path;
    for (Cell c = to;; c = parent[c]) {
        path.push_back(c);
        if (c == parent[c]) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Longest path from `from` by accumulated Euclidean step length.
std::vector<Cell> longest_branch(const std::vector<Cell>& skel,
                                 const Cell& from) {
    std::unordered_set<Cell, CellHash> cells(skel.begin(), skel.end());
    if (!cells.count(from)) return {};
    std::unordered_map<Cell, Cell, CellHash> parent;
    std::unordered_map<Cell, double, CellHash> len;
    std::queue<Cell> q;
    q.push(from);
    parent[from] = from;
    len[from] = 0;
    Cell far = from;
    double far_len = 0;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        double cl = len[c];
        if (cl > far_len + 1e-9 ||
            (std::abs(cl - far_len) <= 1e-9 && c < far)) {
            far_len = cl;
            far = c;
        }
        for (auto& d : kStep8) {
            Cell n{c.row + d[0], c.col + d[1]};
            if (!cells.count(n) || parent.count(n)) continue;
            parent[n] = c;
            len[n] = cl + (d[0] != 0 && d[1] != 0 ? M_SQRT2 : 1.0);
            q.push(n);
        }
    }
    std::vector<Cell> path;
    for (Cell c = far;; c = parent[c]) {
        path.push_back(c);
        if (c == parent[c]) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Vec2> simplify_collinear(const std::vector<Cell>& cells) {
    std::vector<Vec2> pts;
    for (size_t i = 0; i < cells.size(); ++i) {
        Vec2 p = cell_center(cells[i]);
        if (pts.size() >= 2) {
            Vec2& a = pts[pts.size() - 2];
            Vec2& b = pts[pts.size() - 1];
            Vec2 d1 = b - a, d2 = p - b;
            if (std::abs(d1.cross(d2)) < 1e-12 && d1.dot(d2) > 0) {
                b = p;
                continue;
            }
        }
        pts.push_back(p);
    }
    return pts;
}

struct RegionRouter {
    const RegionBuildResult& regions;
    const OccupancyGrid& grid;
    const WallSet& walls;
    double r_min_cells;
    kernels::Exec exec;
    std::unordered_map<int, Vec2> opening_mid;

    Vec2 mid_of(int opening) {
        auto it = opening_mid.find(opening);
        if (it != opening_mid.end()) return it->second;
        Vec2 p = opening_anchor_point(regions.openings[opening], grid);
        opening_mid[opening] = p;
        return p;
    }

    AnchorKind kind_of(int opening) const {
        return regions.openings[opening].kind == OpeningKind::frontier
                   ? AnchorKind::frontier_tip
                   : AnchorKind::opening;
    }

    // Thinning domain: region area plus its opening strips and mouths.
    std::vector<Cell> domain(const RegionFace& face,
                             const std::vector<Cell>& extra) const {
        std::vector<Cell> cells = face.area;
        std::unordered_set<int> seen;
        for (const Crossing& c : face.crossings) {
            if (!seen.insert(c.opening).second) continue;
            for (const Cell& sc : opening_strip(regions.openings[c.opening]))
                if (grid.is_free(sc)) cells.push_back(sc);
        }
        for (const Cell& c : extra)
            if (grid.is_free(c)) cells.push_back(c);
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        return cells;
    }

    Polyline route_pair(const RegionFace& face, int op_a, int op_b) {
        Vec2 a = mid_of(op_a), b = mid_of(op_b);
        Polyline pl;
        pl.region = face.id;
        pl.kind_front = kind_of(op_a);
        pl.kind_back = kind_of(op_b);
        if (ray_clear(a, b, r_min_cells, grid, walls)) {
            pl.pts = {a, b};
            pl.straight_segments.push_back({a, b});
            return pl;
        }
        Cell ca = point_cell(a), cb = point_cell(b);
        auto skel = thin_region(domain(face, {ca, cb}), {ca, cb}, exec);
        auto path = skeleton_path(skel, ca, cb);
        if (path.empty()) path = free_path(grid, ca, cb);
        if (path.empty())
            throw std::runtime_error("no skeleton path through region " +
                                     std::to_string(face.id));
        pl.pts = simplify_collinear(path);
        return pl;
    }

    // One spoke per opening into the centroid.
    std::vector<Polyline> route_spokes(const RegionFace& face) {
        std::vector<Polyline> out;
        Vec2 center = face.centroid;
        Cell cc = point_cell(center);
        if (!grid.is_free(cc)) {
            // Snap the hub to free space.
            Vec2 snapped = center;
            double best = std::numeric_limits<double>::max();
            for (const Cell& c : face.area) {
                double d = dist(cell_center(c), center);
                if (d < best - 1e-12) {
                    best = d;
                    snapped = cell_center(c);
                }
            }
            center = snapped;
            cc = point_cell(center);
        } else {
            center = cell_center(cc);
        }

        std::vector<int> ops;
        std::unordered_set<int> seen;
        for (const Crossing& c : face.crossings)
            if (seen.insert(c.opening).second) ops.push_back(c.opening);

        std::vector<Cell> locks{cc};
        for (int op : ops) locks.push_back(point_cell(mid_of(op)));
        std::vector<Cell> skel;

        for (int op : ops) {
            Vec2 m = mid_of(op);
            Polyline pl;
            pl.region = face.id;
            pl.kind_front = kind_of(op);
            pl.kind_back = AnchorKind::intersection_center;
            if (ray_clear(m, center, r_min_cells, grid, walls)) {
                pl.pts = {m, center};
                pl.straight_segments.push_back({m, center});
                out.push_back(std::move(pl));
                continue;
            }
            if (skel.empty())
                skel = thin_region(domain(face, locks), locks, exec);
            Cell mc = point_cell(m);
            auto path = skeleton_path(skel, mc, cc);
            if (path.empty()) path = free_path(grid, mc, cc);
            if (path.empty())
                throw std::runtime_error("no skeleton path through region " +
                                         std::to_string(face.id));
            // Follow the local skeleton only until the straight shot to the
            // hub opens up.
            size_t cut = path.size() - 1;
            for (size_t t = 0; t < path.size(); ++t) {
                if (ray_clear(cell_center(path[t]), center, r_min_cells, grid,
                              walls)) {
                    cut = t;
                    break;
                }
            }
            std::vector<Cell> head(path.begin(), path.begin() + cut + 1);
            pl.pts = simplify_collinear(head);
            if (pl.pts.empty()) pl.pts.push_back(m);
            if (!(std::abs(pl.pts.back().x - center.x) < 1e-12 &&
                  std::abs(pl.pts.back().y - center.y) < 1e-12)) {
                pl.straight_segments.push_back({pl.pts.back(), center});
                pl.pts.push_back(center);
            }
            out.push_back(std::move(pl));
        }
        return out;
    }

    Polyline route_branch(const RegionFace& face, int op) {
        Vec2 m = mid_of(op);
        Cell mc = point_cell(m);
        auto skel = thin_region(domain(face, {mc}), {mc}, exec);
        auto path = longest_branch(skel, mc);
        Polyline pl;
        pl.region = face.id;
        pl.kind_front = kind_of(op);
        pl.kind_back = AnchorKind::dead_end_tip;
        pl.pts = path.empty() ? std::vector<Vec2>{m} : simplify_collinear(path);
        if (pl.pts.size() < 2) {
            // Degenerate stub: keep a zero-area spur off the mouth.
            pl.pts = {m};
        }
        return pl;
    }
};

}  // namespace

Skeleton build_skeleton(const RegionBuildResult& regions,
                        const OccupancyGrid& grid, const WallSet& walls,
                        const RobotSpec& robot, kernels::Exec exec) {
    Skeleton sk;
    RegionRouter router{regions, grid, walls, robot.r_min / grid.resolution,
                        exec, {}};

    for (const RegionFace& face : regions.intersections)
        for (Polyline& pl : router.route_spokes(face))
            sk.paths.push_back(std::move(pl));

    for (const RegionFace& face : regions.pathways) {
        std::vector<int> ops;
        std::unordered_set<int> seen;
        for (const Crossing& c : face.crossings)
            if (seen.insert(c.opening).second) ops.push_back(c.opening);
        if (ops.size() == 1) {
            Polyline pl = router.route_branch(face, ops[0]);
            if (pl.pts.size() >= 2) sk.paths.push_back(std::move(pl));
        } else if (ops.size() == 2) {
            sk.paths.push_back(router.route_pair(face, ops[0], ops[1]));
        } else if (ops.size() >= 3) {
            for (Polyline& pl : router.route_spokes(face))
                sk.paths.push_back(std::move(pl));
        }
    }
    return sk;
}

}  // namespace gridfast
