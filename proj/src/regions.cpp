#include "gridfast/regions.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace gridfast {

std::vector<Cell> run_cells(const WallSet& walls, const WallRun& run) {
    std::vector<Cell> out;
    const auto& cells = walls.walls[run.wall].cells;
    int n = int(cells.size());
    if (n == 0) return out;
    if (run.full) {
        for (int i = 0; i < n; ++i) out.push_back(cells[(run.begin + i) % n]);
        out.push_back(cells[run.begin]);
        return out;
    }
    for (int i = run.begin;; i = (i + 1) % n) {
        out.push_back(cells[i]);
        if (i == run.end) break;
    }
    return out;
}

std::vector<Cell> opening_strip(const OpeningDetection& o) {
    return supercover_line(o.first_pt(), o.second_pt());
}

AnchorIndex::AnchorIndex(const WallSet& walls,
                         const std::vector<OpeningDetection>& ops,
                         const std::vector<uint8_t>& active) {
    per_wall_.resize(walls.walls.size());
    for (size_t i = 0; i < ops.size(); ++i) {
        if (i < active.size() && !active[i]) continue;
        insert(ops[i], 0);
        insert(ops[i], 1);
    }
}

void AnchorIndex::insert(const OpeningDetection& o, int end) {
    const WallAnchor& a = end == 0 ? o.first_anchor : o.second_anchor;
    if (a.wall >= 0 && a.wall < int(per_wall_.size()))
        per_wall_[a.wall].insert(AnchorEntry{a.index, o.id, end});
}

void AnchorIndex::erase(const OpeningDetection& o, int end) {
    const WallAnchor& a = end == 0 ? o.first_anchor : o.second_anchor;
    if (a.wall >= 0 && a.wall < int(per_wall_.size()))
        per_wall_[a.wall].erase(AnchorEntry{a.index, o.id, end});
}

AnchorEntry AnchorIndex::next_after(int wall, const AnchorEntry& e) const {
    const auto& s = per_wall_[wall];
    if (s.empty()) throw std::runtime_error("anchor walk on empty wall");
    // Anchors sharing the cell are crossed before the walk leaves it; the
    // pairwise shrink parks adjacent opening ends on one corner cell.
    auto lo = s.lower_bound(AnchorEntry{e.index, -1, -1});
    for (auto it = lo; it != s.end() && it->index == e.index; ++it)
        if (!(*it == e)) return *it;
    auto it = s.upper_bound(AnchorEntry{e.index, INT32_MAX, INT32_MAX});
    if (it == s.end()) it = s.begin();
    return *it;
}

namespace {

struct FaceLoop {
    std::vector<Crossing> crossings;
    std::vector<WallRun> wall_runs;
};

// Traces the face starting with crossing `c0`: cross the opening, follow
// the exit wall in +1 order to the next anchor, cross that opening, repeat
// until back at `c0`.
FaceLoop walk_face(const std::vector<OpeningDetection>& ops,
                   const AnchorIndex& index, Crossing c0) {
    FaceLoop loop;
    Crossing cur = c0;
    size_t cap = 2 * ops.size() + 4;
    while (cap-- > 0) {
        loop.crossings.push_back(cur);
        const OpeningDetection& o = ops[cur.opening];
        const WallAnchor& exit_a =
            cur.forward ? o.second_anchor : o.first_anchor;
        int exit_end = cur.forward ? 1 : 0;
        AnchorEntry self{exit_a.index, o.id, exit_end};
        AnchorEntry to = index.next_after(exit_a.wall, self);

        WallRun run;
        run.wall = exit_a.wall;
        run.begin = exit_a.index;
        run.end = to.index;
        run.full = index.count(exit_a.wall) == 1;
        loop.wall_runs.push_back(run);

        Crossing next{to.opening, to.end == 0};
        if (next == c0) return loop;
        cur = next;
    }
    throw std::runtime_error("region walk failed to close at opening " +
                             std::to_string(ops[c0.opening].id));
}

// Region boundary polygon: strip cells along each crossing, then the wall
// run cells, in walk order.
std::vector<Cell> face_loop_cells(const WallSet& walls,
                                  const std::vector<OpeningDetection>& ops,
                                  const FaceLoop& loop) {
    std::vector<Cell> poly;
    for (size_t k = 0; k < loop.crossings.size(); ++k) {
        const Crossing& c = loop.crossings[k];
        // The polygon has to pass through the exact strip cells, so the
        // canonical first-to-second rasterization is reused here; the
        // traversal only flips its order.
        std::vector<Cell> strip = opening_strip(ops[c.opening]);
        if (!c.forward) std::reverse(strip.begin(), strip.end());
        for (const Cell& sc : strip)
            if (poly.empty() || !(poly.back() == sc)) poly.push_back(sc);
        for (const Cell& rc : run_cells(walls, loop.wall_runs[k]))
            if (poly.empty() || !(poly.back() == rc)) poly.push_back(rc);
    }
    while (poly.size() > 1 && poly.back() == poly.front()) poly.pop_back();
    return poly;
}

bool is_beyond_frontier_face(const std::vector<OpeningDetection>& ops,
                             const FaceLoop& loop) {
    if (loop.crossings.size() != 1) return false;
    const Crossing& c = loop.crossings[0];
    return ops[c.opening].kind == OpeningKind::frontier && !c.forward;
}

void fill_area(RegionFace& face, const WallSet& walls,
               const std::vector<OpeningDetection>& ops,
               const OccupancyGrid& grid) {
    FaceLoop loop{face.crossings, face.wall_runs};
    std::vector<Cell> poly = face_loop_cells(walls, ops, loop);

    std::unordered_set<Cell, CellHash> strip_cells;
    for (const Crossing& c : face.crossings)
        for (const Cell& sc : opening_strip(ops[c.opening]))
            strip_cells.insert(sc);

    std::unordered_set<Cell, CellHash> area;
    for (const WallRun& r : face.wall_runs)
        for (const Cell& rc : run_cells(walls, r))
            if (grid.is_free(rc) && !strip_cells.count(rc)) area.insert(rc);
    for (const Cell& c : fill_loop_interior(poly))
        if (grid.is_free(c) && !strip_cells.count(c)) area.insert(c);

    face.area.assign(area.begin(), area.end());
    std::sort(face.area.begin(), face.area.end());
    double sx = 0, sy = 0;
    for (const Cell& c : face.area) {
        sx += c.col + 0.5;
        sy += c.row + 0.5;
    }
    if (!face.area.empty())
        face.centroid = {sx / double(face.area.size()),
                         sy / double(face.area.size())};
}

}  // namespace

RegionBuildResult build_regions(const OccupancyGrid& grid, const WallSet& walls,
                                const std::vector<Frontier>& frontiers,
                                std::vector<OpeningDetection> openings) {
    (void)frontiers;
    RegionBuildResult result;
    for (size_t i = 0; i < openings.size(); ++i) openings[i].id = int(i);
    std::vector<uint8_t> active(openings.size(), 1);

    // Openings whose two faces are both too small to be an intersection are
    // noise cuts in plain corridors; drop them until stable.
    while (true) {
        AnchorIndex index(walls, openings, active);
        std::vector<int> face_of(openings.size() * 2, -1);
        std::vector<int> face_sizes;
        for (size_t i = 0; i < openings.size(); ++i) {
            if (!active[i]) continue;
            for (int fwd = 1; fwd >= 0; --fwd) {
                size_t slot = i * 2 + fwd;
                if (face_of[slot] >= 0) continue;
                FaceLoop loop =
                    walk_face(openings, index, Crossing{int(i), fwd == 1});
                int fid = int(face_sizes.size());
                face_sizes.push_back(int(loop.crossings.size()));
                for (const Crossing& c : loop.crossings)
                    face_of[size_t(c.opening) * 2 + (c.forward ? 1 : 0)] = fid;
            }
        }
        bool removed = false;
        for (size_t i = 0; i < openings.size(); ++i) {
            if (!active[i]) continue;
            if (openings[i].kind == OpeningKind::frontier) continue;
            int f1 = face_of[i * 2 + 1], f2 = face_of[i * 2];
            int m1 = f1 >= 0 ? face_sizes[f1] : 0;
            int m2 = f2 >= 0 ? face_sizes[f2] : 0;
            if (std::max(m1, m2) < 3) {
                active[i] = 0;
                removed = true;
            }
        }
        if (!removed) break;
    }

    std::vector<OpeningDetection> kept;
    for (size_t i = 0; i < openings.size(); ++i)
        if (active[i]) kept.push_back(openings[i]);
    for (size_t i = 0; i < kept.size(); ++i) kept[i].id = int(i);
    result.openings = std::move(kept);
    if (result.openings.empty()) return result;

    std::vector<uint8_t> all_active(result.openings.size(), 1);
    AnchorIndex index(walls, result.openings, all_active);
    std::vector<uint8_t> crossed(result.openings.size() * 2, 0);
    std::vector<RegionFace> faces;
    for (size_t i = 0; i < result.openings.size(); ++i) {
        for (int fwd = 1; fwd >= 0; --fwd) {
            if (crossed[i * 2 + fwd]) continue;
            FaceLoop loop =
                walk_face(result.openings, index, Crossing{int(i), fwd == 1});
            for (const Crossing& c : loop.crossings)
                crossed[size_t(c.opening) * 2 + (c.forward ? 1 : 0)] = 1;
            if (is_beyond_frontier_face(result.openings, loop)) continue;

            RegionFace face;
            face.crossings = std::move(loop.crossings);
            face.wall_runs = std::move(loop.wall_runs);
            bool any_detected = false;
            bool any_frontier = false;
            for (const Crossing& c : face.crossings) {
                if (result.openings[c.opening].kind == OpeningKind::frontier)
                    any_frontier = true;
                else
                    any_detected = true;
            }
            if (int(face.crossings.size()) >= 3 && any_detected)
                face.cls = RegionClass::intersection;
            else if (any_frontier)
                face.cls = RegionClass::frontier_path;
            else if (face.crossings.size() == 2)
                face.cls = RegionClass::pathway;
            else
                face.cls = RegionClass::dead_end;
            fill_area(face, walls, result.openings, grid);
            faces.push_back(std::move(face));
        }
    }

    auto by_centroid = [](const RegionFace& a, const RegionFace& b) {
        if (a.centroid.y != b.centroid.y) return a.centroid.y < b.centroid.y;
        return a.centroid.x < b.centroid.x;
    };
    std::stable_sort(faces.begin(), faces.end(), by_centroid);
    for (RegionFace& f : faces) {
        f.id = int(result.intersections.size() + result.pathways.size());
        if (f.cls == RegionClass::intersection)
            result.intersections.push_back(std::move(f));
        else
            result.pathways.push_back(std::move(f));
    }
    return result;
}

RegionFace rewalk_face(const OccupancyGrid& grid, const WallSet& walls,
                       const std::vector<OpeningDetection>& openings,
                       const AnchorIndex& index, Crossing seed) {
    FaceLoop loop = walk_face(openings, index, seed);
    RegionFace face;
    face.crossings = std::move(loop.crossings);
    face.wall_runs = std::move(loop.wall_runs);
    fill_area(face, walls, openings, grid);
    return face;
}

bool validate_region(const RegionFace& region,
                     const std::vector<OpeningDetection>& openings,
                     const OccupancyGrid& grid, const WallSet& walls) {
    if (region.area.empty()) return false;
    std::unordered_set<Cell, CellHash> area(region.area.begin(),
                                            region.area.end());
    for (const Cell& c : region.area)
        if (!grid.is_free(c)) return false;

    std::unordered_map<Cell, int, CellHash> strip_count;
    std::vector<std::vector<Cell>> strips;
    std::unordered_set<int> seen;
    for (const Crossing& c : region.crossings) {
        if (!seen.insert(c.opening).second) continue;
        strips.push_back(opening_strip(openings[c.opening]));
        for (const Cell& sc : strips.back()) ++strip_count[sc];
    }
    for (size_t a = 0; a < strips.size(); ++a)
        for (size_t b = a + 1; b < strips.size(); ++b)
            for (const Cell& ca : strips[a])
                for (const Cell& cb : strips[b]) {
                    int manhattan =
                        std::abs(ca.row - cb.row) + std::abs(ca.col - cb.col);
                    if (manhattan <= 1) return false;
                }

    for (const Cell& c : region.area) {
        for (auto& d : kNbr4) {
            Cell n{c.row + d[0], c.col + d[1]};
            if (area.count(n)) continue;
            if (grid.at(n) == CellState::occupied) continue;
            auto it = strip_count.find(n);
            if (it != strip_count.end() && it->second == 1) continue;
            return false;
        }
    }

    std::unordered_set<int> boundary_walls;
    for (const WallRun& r : region.wall_runs) boundary_walls.insert(r.wall);
    for (const Wall& w : walls.walls) {
        if (boundary_walls.count(w.id)) continue;
        bool contained = !w.cells.empty();
        for (const Cell& c : w.cells)
            if (!area.count(c)) {
                contained = false;
                break;
            }
        if (contained) return false;
    }
    return true;
}

}  // namespace gridfast
