#include "gridfast/walls.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace gridfast {

namespace {

// Clockwise Moore neighborhood, starting east: E SE S SW W NW N NE.
constexpr int kMoore[8][2] = {{0, 1},  {1, 1},   {1, 0},  {1, -1},
                              {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

int first_nonfree_dir(const OccupancyGrid& grid, const Cell& c) {
    for (int d = 0; d < 8; ++d) {
        Cell n{c.row + kMoore[d][0], c.col + kMoore[d][1]};
        if (grid.at(n) != CellState::free) return d;
    }
    return -1;
}

// Moore-neighbor tracing of the free-space boundary loop through `start`.
// Diagonal steps additionally emit a free boundary corner cell between the
// two, so loops carry every cell with a non-free 8-neighbor.
std::vector<Cell> trace_loop(const OccupancyGrid& grid, const Cell& start) {
    std::vector<Cell> loop;
    int back = first_nonfree_dir(grid, start);
    if (back < 0) return loop;

    Cell cur = start;
    loop.push_back(cur);
    size_t cap = size_t(grid.rows) * grid.cols * 4 + 16;
    bool first = true;
    int first_found = -1;

    while (cap-- > 0) {
        int found = -1;
        for (int i = 1; i <= 8; ++i) {
            int d = (back + i) % 8;
            Cell n{cur.row + kMoore[d][0], cur.col + kMoore[d][1]};
            if (grid.at(n) == CellState::free) {
                found = d;
                break;
            }
        }
        if (found < 0) break;  // isolated cell
        // The move out of the start cell repeating means the loop closed:
        // the (cell, move) pair fully determines the rest of the walk.
        if (!first && cur == start && found == first_found) break;
        if (first) {
            first_found = found;
            first = false;
        }
        Cell next{cur.row + kMoore[found][0], cur.col + kMoore[found][1]};
        // Backtrack for the next step: direction from `next` to the non-free
        // neighbor just before `found` in the scan.
        int before = (found + 7) % 8;
        Cell nf{cur.row + kMoore[before][0], cur.col + kMoore[before][1]};
        int nb = -1;
        for (int d = 0; d < 8; ++d) {
            if (next.row + kMoore[d][0] == nf.row &&
                next.col + kMoore[d][1] == nf.col) {
                nb = d;
                break;
            }
        }
        if (nb < 0) nb = first_nonfree_dir(grid, next);

        if (kMoore[found][0] != 0 && kMoore[found][1] != 0) {
            // Diagonal move; pick up a skipped boundary corner.
            Cell mid1{cur.row, next.col}, mid2{next.row, cur.col};
            for (const Cell& m : {mid1, mid2}) {
                if (is_boundary_free(grid, m)) {
                    if (!(loop.back() == m)) loop.push_back(m);
                    break;
                }
            }
        }
        if (!(loop.back() == next)) loop.push_back(next);
        cur = next;
        back = nb;
    }
    while (loop.size() > 1 && loop.back() == loop.front()) loop.pop_back();
    return loop;
}

}  // namespace

WallAnchor WallSet::nearest(const Cell& c, double radius) const {
    int r = int(std::ceil(radius));
    WallAnchor best;
    double best_d = radius + 1e-9;
    for (int dr = -r; dr <= r; ++dr) {
        for (int dc = -r; dc <= r; ++dc) {
            Cell n{c.row + dr, c.col + dc};
            if (!is_wall(n)) continue;
            double d = std::sqrt(double(dr) * dr + double(dc) * dc);
            if (d < best_d - 1e-12) {
                best_d = d;
                best = anchor_of.at(n);
            } else if (std::abs(d - best_d) <= 1e-12) {
                auto a = anchor_of.at(n);
                if (best.valid() &&
                    (a.wall < best.wall ||
                     (a.wall == best.wall && a.index < best.index)))
                    best = a;
            }
        }
    }
    return best;
}

void WallSet::rebuild_index() {
    mask.assign(size_t(rows) * cols, 0);
    anchor_of.clear();
    for (size_t w = 0; w < walls.size(); ++w) {
        walls[w].id = int(w);
        for (size_t i = 0; i < walls[w].cells.size(); ++i) {
            const Cell& c = walls[w].cells[i];
            mask[size_t(c.row) * cols + c.col] = 1;
            if (!anchor_of.count(c))
                anchor_of[c] = WallAnchor{int(w), int(i)};
        }
    }
}

WallSet trace_walls(const OccupancyGrid& grid,
                    const std::vector<MemberGap>& members) {
    WallSet ws;
    ws.rows = grid.rows;
    ws.cols = grid.cols;
    ws.mask.assign(size_t(grid.rows) * grid.cols, 0);

    // Seed points: the two end cells of every detection member gap.
    std::vector<Cell> seeds;
    for (const MemberGap& m : members) {
        if (m.cells.empty()) continue;
        seeds.push_back(m.cells.front());
        seeds.push_back(m.cells.back());
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::vector<uint8_t> traced(size_t(grid.rows) * grid.cols, 0);
    auto is_traced = [&](const Cell& c) {
        return traced[size_t(c.row) * grid.cols + c.col] != 0;
    };

    for (const Cell& seed : seeds) {
        // Walk to the nearest boundary cell through free space.
        Cell bcell{-1, -1};
        std::deque<Cell> queue{seed};
        std::unordered_set<Cell, CellHash> seen{seed};
        int expansions = 0;
        while (!queue.empty() && expansions++ < 64) {
            Cell c = queue.front();
            queue.pop_front();
            if (is_boundary_free(grid, c)) {
                bcell = c;
                break;
            }
            for (auto& d : kNbr4) {
                Cell n{c.row + d[0], c.col + d[1]};
                if (grid.is_free(n) && seen.insert(n).second)
                    queue.push_back(n);
            }
        }
        if (bcell.row < 0 || is_traced(bcell)) continue;

        std::vector<Cell> loop = trace_loop(grid, bcell);
        if (loop.empty()) continue;
        Wall w;
        w.cells = std::move(loop);
        w.signed_area = loop_signed_area(w.cells);
        for (const Cell& c : w.cells)
            traced[size_t(c.row) * grid.cols + c.col] = 1;
        ws.walls.push_back(std::move(w));
    }
    ws.rebuild_index();
    return ws;
}

std::vector<Cell> fill_loop_interior(const std::vector<Cell>& loop) {
    std::vector<Cell> out;
    if (loop.size() < 3) return out;
    int rmin = loop[0].row, rmax = loop[0].row;
    for (const Cell& c : loop) {
        rmin = std::min(rmin, c.row);
        rmax = std::max(rmax, c.row);
    }
    std::unordered_set<Cell, CellHash> on_loop(loop.begin(), loop.end());

    // Edges bucketed by the scanline rows they cross.
    size_t n = loop.size();
    int nrows = rmax - rmin + 1;
    std::vector<std::vector<std::pair<Vec2, Vec2>>> rows{size_t(nrows)};
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = cell_center(loop[i]);
        Vec2 b = cell_center(loop[(i + 1) % n]);
        if (a.y == b.y) continue;
        double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
        // Half-open rule [lo, hi): scanlines at r + 0.5.
        int r0 = std::max(rmin, int(std::floor(lo - 0.5)) );
        int r1 = std::min(rmax, int(std::ceil(hi)) );
        for (int r = r0; r <= r1; ++r) {
            double y = r + 0.5;
            if ((a.y <= y && y < b.y) || (b.y <= y && y < a.y))
                rows[size_t(r - rmin)].push_back({a, b});
        }
    }

    for (int r = rmin; r <= rmax; ++r) {
        auto& edges = rows[size_t(r - rmin)];
        if (edges.empty()) continue;
        double y = r + 0.5;
        std::vector<double> xs;
        xs.reserve(edges.size());
        for (auto& [a, b] : edges) {
            double t = (y - a.y) / (b.y - a.y);
            xs.push_back(a.x + t * (b.x - a.x));
        }
        std::sort(xs.begin(), xs.end());
        for (size_t i = 0; i + 1 < xs.size(); i += 2) {
            int c0 = int(std::ceil(xs[i] - 0.5 + 1e-9));
            int c1 = int(std::floor(xs[i + 1] - 0.5 - 1e-9));
            for (int c = c0; c <= c1; ++c) {
                Cell cc{r, c};
                if (!on_loop.count(cc)) out.push_back(cc);
            }
        }
    }
    return out;
}

ObjectFilterStats remove_small_objects(OccupancyGrid& grid, WallSet& walls,
                                       std::vector<MemberGap>& members,
                                       int f_obj) {
    ObjectFilterStats stats;
    std::unordered_set<Cell, CellHash> removed_cells;
    std::vector<Wall> kept;

    for (Wall& w : walls.walls) {
        std::set<Cell> unique(w.cells.begin(), w.cells.end());
        int occ_adjacent = 0;
        for (const Cell& c : unique)
            if (has_neighbor8(grid, c, CellState::occupied)) ++occ_adjacent;
        bool removable = occ_adjacent < f_obj;
        std::vector<Cell> interior;
        if (removable) {
            interior = fill_loop_interior(w.cells);
            for (const Cell& c : interior)
                if (grid.is_free(c)) {
                    removable = false;  // free interior: not an enclosed object
                    break;
                }
            if (interior.empty()) removable = false;
        }
        if (!removable) {
            kept.push_back(std::move(w));
            continue;
        }
        for (const Cell& c : interior) {
            if (grid.at(c) != CellState::free) ++stats.filled_cells;
            grid.set(c, CellState::free);
            removed_cells.insert(c);
        }
        for (const Cell& c : unique) removed_cells.insert(c);
        ++stats.removed_walls;
    }
    walls.walls = std::move(kept);
    walls.rebuild_index();

    if (!removed_cells.empty()) {
        // Drop members touching removed objects, then dissolve detections
        // left with fewer than two members.
        std::vector<MemberGap> survivors;
        for (MemberGap& m : members) {
            bool touches = false;
            for (const Cell& c : m.cells)
                if (removed_cells.count(c)) {
                    touches = true;
                    break;
                }
            if (touches)
                ++stats.dropped_members;
            else
                survivors.push_back(std::move(m));
        }
        std::vector<MemberGap> regrouped;
        for (size_t i = 0; i < survivors.size();) {
            size_t j = i;
            while (j < survivors.size() && survivors[j].frame == survivors[i].frame &&
                   survivors[j].det == survivors[i].det)
                ++j;
            if (j - i >= 2) {
                for (size_t t = i; t < j; ++t) {
                    MemberGap m = std::move(survivors[t]);
                    m.member_pos = int(t - i);
                    m.member_count = int(j - i);
                    regrouped.push_back(std::move(m));
                }
            } else {
                stats.dropped_members += int(j - i);
            }
            i = j;
        }
        members = std::move(regrouped);
    }
    return stats;
}

std::vector<Frontier> detect_frontiers(const WallSet& walls,
                                       const RobotSpec& robot,
                                       const OccupancyGrid& grid) {
    std::vector<Frontier> out;
    double r_min_cells = robot.r_min / grid.resolution;
    for (const Wall& w : walls.walls) {
        int n = int(w.cells.size());
        if (n == 0) continue;
        std::vector<uint8_t> flag(n, 0);
        for (int i = 0; i < n; ++i)
            flag[i] = has_neighbor4(grid, w.cells[i], CellState::unknown);

        int total = 0;
        for (auto f : flag) total += f;
        std::vector<std::pair<int, int>> runs;
        if (total == n) {
            runs.push_back({0, n - 1});
        } else if (total > 0) {
            // Maximal cyclic runs: start scanning after a false cell.
            int base = 0;
            while (flag[base]) ++base;
            int i = 0;
            while (i < n) {
                int idx = (base + i) % n;
                if (!flag[idx]) {
                    ++i;
                    continue;
                }
                int j = i;
                while (j + 1 < n && flag[(base + j + 1) % n]) ++j;
                runs.push_back({(base + i) % n, (base + j) % n});
                i = j + 1;
            }
        }
        for (auto [b, e] : runs) {
            const Cell& cb = w.cells[b];
            const Cell& ce = w.cells[e];
            if (cell_dist(cb, ce) < r_min_cells) continue;
            Frontier f;
            f.id = int(out.size());
            f.wall = w.id;
            f.begin = b;
            f.end = e;
            for (int i = b;; i = (i + 1) % n) {
                f.span.push_back(w.cells[i]);
                if (i == e) break;
            }
            out.push_back(std::move(f));
        }
    }
    return out;
}

}  // namespace gridfast
