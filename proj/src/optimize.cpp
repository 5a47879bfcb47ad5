#include "gridfast/optimize.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace gridfast {

double penalty(double x_m, const OptConfig& cfg) {
    if (x_m <= cfg.d_c_min_m)
        return cfg.d_max - (cfg.d_max / cfg.d_c_min_m) * x_m;
    return x_m - cfg.d_c_min_m;
}

double intersection_cost(const RegionFace& face,
                         const std::vector<OpeningDetection>& openings,
                         const OccupancyGrid& grid, const OptConfig& cfg) {
    double res = grid.resolution;
    double total = 0.0;
    std::unordered_set<int> seen;
    for (const Crossing& c : face.crossings) {
        if (!seen.insert(c.opening).second) continue;
        const OpeningDetection& o = openings[c.opening];
        double len_m = o.length_cells() * res;
        double d_c = dist(o.midpoint(), face.centroid) * res;
        total += len_m + penalty(d_c, cfg);
    }
    return total;
}

namespace {

inline Cell anchor_cell(const WallSet& walls, const WallAnchor& a) {
    return walls.walls[a.wall].cells[a.index];
}

inline WallAnchor exit_anchor(const OpeningDetection& o, const Crossing& c) {
    return c.forward ? o.second_anchor : o.first_anchor;
}

inline WallAnchor entry_anchor(const OpeningDetection& o, const Crossing& c) {
    return c.forward ? o.first_anchor : o.second_anchor;
}

int64_t bucket_key(int br, int bc) {
    return (int64_t(br) << 32) ^ uint32_t(bc);
}

}  // namespace

Optimizer::Optimizer(const OccupancyGrid& grid, const WallSet& walls,
                     const std::vector<Frontier>& frontiers,
                     const RobotSpec& robot, const OptConfig& cfg,
                     std::vector<OpeningDetection>& openings,
                     std::vector<GrowTraceRow>* trace)
    : grid_(grid),
      walls_(walls),
      frontiers_(frontiers),
      r_min_cells_(robot.r_min / grid.resolution),
      cfg_(cfg),
      openings_(openings),
      active_(openings.size(), 1),
      dead_end_facing_(openings.size(), 0),
      trace_(trace),
      index_(walls, openings, std::vector<uint8_t>(openings.size(), 1)),
      bucket_keys_(openings.size()) {
    frontier_mask_.assign(size_t(grid.rows) * grid.cols, 0);
    for (const Frontier& f : frontiers_)
        for (const Cell& c : f.span)
            frontier_mask_[size_t(c.row) * grid.cols + c.col] = 1;
    for (size_t i = 0; i < openings_.size(); ++i) {
        anchor_cells_[openings_[i].first].push_back(int(i));
        anchor_cells_[openings_[i].second].push_back(int(i));
        bucket_insert(int(i));
    }
}

void Optimizer::set_dead_end_openings(const std::vector<int>& opening_ids) {
    for (int id : opening_ids)
        if (id >= 0 && id < int(dead_end_facing_.size()))
            dead_end_facing_[id] = 1;
}

void Optimizer::bucket_insert(int id) {
    const OpeningDetection& o = openings_[id];
    int r0 = std::min(o.first.row, o.second.row) / kBucket;
    int r1 = std::max(o.first.row, o.second.row) / kBucket;
    int c0 = std::min(o.first.col, o.second.col) / kBucket;
    int c1 = std::max(o.first.col, o.second.col) / kBucket;
    for (int br = r0; br <= r1; ++br)
        for (int bc = c0; bc <= c1; ++bc) {
            int64_t key = bucket_key(br, bc);
            buckets_[key].push_back(id);
            bucket_keys_[id].push_back(key);
        }
}

void Optimizer::bucket_erase(int id) {
    for (int64_t key : bucket_keys_[id]) {
        auto& vec = buckets_[key];
        vec.erase(std::remove(vec.begin(), vec.end(), id), vec.end());
    }
    bucket_keys_[id].clear();
}

void Optimizer::gather_nearby(const Cell& a, const Cell& b,
                              std::vector<int>& out) const {
    int r0 = std::min(a.row, b.row) / kBucket - 1;
    int r1 = std::max(a.row, b.row) / kBucket + 1;
    int c0 = std::min(a.col, b.col) / kBucket - 1;
    int c1 = std::max(a.col, b.col) / kBucket + 1;
    for (int br = r0; br <= r1; ++br)
        for (int bc = c0; bc <= c1; ++bc) {
            auto it = buckets_.find(bucket_key(br, bc));
            if (it == buckets_.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

void Optimizer::move_anchor(int opening_id, int end, const WallAnchor& to) {
    OpeningDetection& o = openings_[opening_id];
    index_.erase(o, end);
    bucket_erase(opening_id);
    Cell old_cell = end == 0 ? o.first : o.second;
    auto& oldvec = anchor_cells_[old_cell];
    oldvec.erase(std::remove(oldvec.begin(), oldvec.end(), opening_id),
                 oldvec.end());

    Cell nc = anchor_cell(walls_, to);
    if (end == 0) {
        o.first_anchor = to;
        o.first = nc;
    } else {
        o.second_anchor = to;
        o.second = nc;
    }
    anchor_cells_[nc].push_back(opening_id);
    index_.insert(o, end);
    bucket_insert(opening_id);
}

bool Optimizer::shares_anchor_cell(int opening_id) const {
    const OpeningDetection& o = openings_[opening_id];
    for (const Cell& c : {o.first, o.second}) {
        auto it = anchor_cells_.find(c);
        if (it == anchor_cells_.end()) continue;
        for (int id : it->second)
            if (id != opening_id && active_[id]) return true;
    }
    return false;
}

void Optimizer::place_anchors(int opening_id, const WallAnchor& first,
                              const WallAnchor& second) {
    move_anchor(opening_id, 0, first);
    move_anchor(opening_id, 1, second);
}

void Optimizer::deactivate(int opening_id) {
    if (!active_[opening_id]) return;
    active_[opening_id] = 0;
    OpeningDetection& o = openings_[opening_id];
    index_.erase(o, 0);
    index_.erase(o, 1);
    bucket_erase(opening_id);
    for (const Cell& c : {o.first, o.second}) {
        auto& vec = anchor_cells_[c];
        vec.erase(std::remove(vec.begin(), vec.end(), opening_id), vec.end());
    }
    o.status = OpeningStatus::removed;
}

std::vector<WallAnchor> Optimizer::extend(const WallAnchor& from, int dir,
                                          int self_opening,
                                          bool& self_loop) const {
    std::vector<WallAnchor> out;
    self_loop = false;
    const auto& cells = walls_.walls[from.wall].cells;
    int n = int(cells.size());
    std::unordered_set<int> face_openings;
    if (current_face_)
        for (const Crossing& c : current_face_->crossings)
            face_openings.insert(c.opening);

    for (int step = 1; step < n; ++step) {
        int idx = ((from.index + dir * step) % n + n) % n;
        const Cell& c = cells[idx];
        if (frontier_mask_[size_t(c.row) * grid_.cols + c.col]) break;
        bool blocked = false;
        auto it = anchor_cells_.find(c);
        if (it != anchor_cells_.end()) {
            for (int id : it->second) {
                if (!active_[id]) continue;
                if (id == self_opening || face_openings.count(id))
                    self_loop = true;
                blocked = true;
                break;
            }
        }
        if (blocked) break;
        out.push_back(WallAnchor{from.wall, idx});
    }
    if (self_loop && out.size() > 1) out.resize(out.size() / 2);
    return out;
}

bool Optimizer::feasible(int opening_id, const Cell& a, const Cell& b) const {
    if (a == b) return false;
    if (cell_dist(a, b) < r_min_cells_) return false;
    auto cand = supercover_line(cell_center(a), cell_center(b));
    for (const Cell& c : cand) {
        if (chebyshev(c, a) <= 1 || chebyshev(c, b) <= 1) continue;
        if (walls_.is_wall(c)) return false;
    }
    Vec2 pa = cell_center(a), pb = cell_center(b);
    std::vector<int> nearby;
    gather_nearby(a, b, nearby);
    std::unordered_set<Cell, CellHash> cand_set(cand.begin(), cand.end());
    for (int i : nearby) {
        if (!active_[i] || i == opening_id) continue;
        const OpeningDetection& o = openings_[i];
        if (segments_intersect(pa, pb, o.first_pt(), o.second_pt()))
            return false;
        // Opening cell sets may not touch: rejected already when their
        // strips share or 4-neighbor a cell.
        for (const Cell& c :
             supercover_line(o.first_pt(), o.second_pt())) {
            if (cand_set.count(c)) return false;
            for (auto& d : kNbr4)
                if (cand_set.count(Cell{c.row + d[0], c.col + d[1]}))
                    return false;
        }
    }
    return true;
}

bool Optimizer::shrink_face(RegionFace& face) {
    current_face_ = &face;
    bool moved = false;
    int m = int(face.crossings.size());
    for (int k = 0; k < m; ++k) {
        const Crossing& ck = face.crossings[k];
        const Crossing& cn = face.crossings[(k + 1) % m];
        OpeningDetection& ok = openings_[ck.opening];
        OpeningDetection& on = openings_[cn.opening];
        if (ok.kind == OpeningKind::frontier || on.kind == OpeningKind::frontier)
            continue;
        if (!active_[ck.opening] || !active_[cn.opening]) continue;

        WallAnchor exit_a = exit_anchor(ok, ck);
        WallAnchor entry_n = entry_anchor(on, cn);
        if (exit_a.wall != entry_n.wall) continue;
        Cell fixed1 = anchor_cell(walls_, entry_anchor(ok, ck));
        Cell fixed2 = anchor_cell(walls_, exit_anchor(on, cn));

        const auto& cells = walls_.walls[exit_a.wall].cells;
        int n = int(cells.size());
        std::vector<WallAnchor> space;
        bool loop_a = false, loop_b = false;
        auto back = extend(exit_a, -1, ck.opening, loop_a);
        for (auto it = back.rbegin(); it != back.rend(); ++it)
            space.push_back(*it);
        for (int i = exit_a.index;; i = (i + 1) % n) {
            space.push_back(WallAnchor{exit_a.wall, i});
            if (i == entry_n.index) break;
        }
        for (const WallAnchor& w : extend(entry_n, +1, cn.opening, loop_b))
            space.push_back(w);

        double best = std::numeric_limits<double>::max();
        WallAnchor best_anchor;
        for (const WallAnchor& w : space) {
            const Cell& wc = cells[w.index];
            double d1 = cell_dist(fixed1, wc), d2 = cell_dist(fixed2, wc);
            double v = d1 * d1 + d2 * d2;
            if (v < best - 1e-12) {
                best = v;
                best_anchor = w;
            }
        }
        if (!best_anchor.valid()) continue;
        const Cell& bc = cells[best_anchor.index];
        // Never collapse an opening onto a single cell.
        if (fixed1 == bc || fixed2 == bc) continue;
        if (!(anchor_cell(walls_, exit_a) == bc)) moved = true;
        int exit_end = ck.forward ? 1 : 0;
        int entry_end = cn.forward ? 0 : 1;
        move_anchor(ck.opening, exit_end, best_anchor);
        move_anchor(cn.opening, entry_end, best_anchor);
    }
    current_face_ = nullptr;
    return moved;
}

GrowRuns Optimizer::grow_runs(const RegionFace& face, int k) const {
    GrowRuns runs;
    const Crossing& ck = face.crossings[k];
    const OpeningDetection& o = openings_[ck.opening];

    WallAnchor exit_a = exit_anchor(o, ck);
    WallAnchor entry_a = entry_anchor(o, ck);
    runs.ws.push_back(exit_a);
    runs.we.push_back(entry_a);
    bool loop_a = false, loop_b = false;
    for (const WallAnchor& w : extend(exit_a, -1, ck.opening, loop_a))
        runs.ws.push_back(w);
    for (const WallAnchor& w : extend(entry_a, +1, ck.opening, loop_b))
        runs.we.push_back(w);
    runs.dead_end = loop_a || loop_b || dead_end_facing_[ck.opening];
    return runs;
}

std::vector<int> Optimizer::grow_face(const RegionFace& face,
                                      const Vec2& centroid) {
    current_face_ = &face;
    std::vector<int> removed;
    double res = grid_.resolution;

    for (int k = 0; k < int(face.crossings.size()); ++k) {
        const Crossing& ck = face.crossings[k];
        int oid = ck.opening;
        OpeningDetection& o = openings_[oid];
        if (o.kind == OpeningKind::frontier || !active_[oid]) continue;

        GrowRuns runs = grow_runs(face, k);
        auto cell_of = [&](const WallAnchor& a) -> const Cell& {
            return walls_.walls[a.wall].cells[a.index];
        };
        int I = int(runs.ws.size()), J = int(runs.we.size());
        int i = 0, j = 0;
        double d_min = cell_dist(cell_of(runs.ws[0]), cell_of(runs.we[0]));
        int ds_count = 0;
        double best_score = std::numeric_limits<double>::max();
        int best_i = -1, best_j = -1;
        int committed_i = -1, committed_j = -1;
        bool gated = runs.dead_end;
        bool stepped = false;

        while (true) {
            double d1 =
                i + 1 < I
                    ? cell_dist(cell_of(runs.ws[i + 1]), cell_of(runs.we[j]))
                    : std::numeric_limits<double>::max();
            double d2 =
                j + 1 < J
                    ? cell_dist(cell_of(runs.ws[i]), cell_of(runs.we[j + 1]))
                    : std::numeric_limits<double>::max();
            if (i + 1 < I && (j + 1 >= J || d1 < d2))
                ++i;
            else if (j + 1 < J)
                ++j;
            else
                break;
            stepped = true;

            Cell ca = cell_of(runs.ws[i]), cb = cell_of(runs.we[j]);
            double d = cell_dist(ca, cb);
            if (d < d_min) {
                d_min = d;
                ds_count = 0;
            }
            if (!gated || ds_count >= cfg_.d_s) {
                if (best_i >= 0) {
                    committed_i = best_i;
                    committed_j = best_j;
                }
                ds_count = 0;
            } else {
                ++ds_count;
            }
            Vec2 mid = (cell_center(ca) + cell_center(cb)) * 0.5;
            double score = d * res + penalty(dist(mid, centroid) * res, cfg_);
            bool accepted = false;
            if (score < best_score && feasible(oid, ca, cb)) {
                best_score = score;
                best_i = i;
                best_j = j;
                accepted = true;
            }
            if (trace_)
                trace_->push_back({face.id, o.id, i, j, d, score, accepted});
        }
        // The final step of the walk may still improve the score; openings
        // that are not gated take the plain argmin.
        if (!gated && best_i >= 0) {
            committed_i = best_i;
            committed_j = best_j;
        }
        if (committed_i >= 0) {
            int exit_end = ck.forward ? 1 : 0;
            int entry_end = ck.forward ? 0 : 1;
            move_anchor(oid, exit_end, runs.ws[committed_i]);
            move_anchor(oid, entry_end, runs.we[committed_j]);
        } else if (stepped) {
            deactivate(oid);
            removed.push_back(oid);
        }
    }
    current_face_ = nullptr;
    return removed;
}

OptimizeStats optimize_all(RegionBuildResult& regions, const OccupancyGrid& grid,
                           const WallSet& walls,
                           const std::vector<Frontier>& frontiers,
                           const RobotSpec& robot, const OptConfig& cfg,
                           std::vector<GrowTraceRow>* trace) {
    OptimizeStats stats;
    if (regions.intersections.empty()) return stats;
    Optimizer opt(grid, walls, frontiers, robot, cfg, regions.openings, trace);
    std::vector<int> dead_end_ids;
    for (const RegionFace& p : regions.pathways)
        if (p.cls == RegionClass::dead_end)
            for (const Crossing& c : p.crossings)
                dead_end_ids.push_back(c.opening);
    opt.set_dead_end_openings(dead_end_ids);

    // Intersections already sit in centroid order.
    for (RegionFace& inter : regions.intersections) {
        int rounds = 0;
        std::unordered_map<int, std::pair<WallAnchor, WallAnchor>> snapshot;
        for (const Crossing& c : inter.crossings)
            snapshot[c.opening] = {regions.openings[c.opening].first_anchor,
                                   regions.openings[c.opening].second_anchor};
        try {
            while (true) {
                Crossing seed{-1, true};
                for (const Crossing& c : inter.crossings)
                    if (opt.active(c.opening)) {
                        seed = c;
                        break;
                    }
                if (seed.opening < 0) {
                    ++stats.removed_intersections;
                    break;
                }
                RegionFace face = rewalk_face(grid, walls, regions.openings,
                                              opt.index(), seed);
                face.id = inter.id;
                if (int(face.crossings.size()) < 3) {
                    for (const Crossing& c : face.crossings)
                        if (opt.active(c.opening) &&
                            regions.openings[c.opening].kind !=
                                OpeningKind::frontier)
                            opt.deactivate(c.opening);
                    ++stats.removed_intersections;
                    break;
                }
                opt.shrink_face(face);
                face = rewalk_face(grid, walls, regions.openings, opt.index(),
                                   seed);
                face.id = inter.id;
                std::vector<int> removed = opt.grow_face(face, face.centroid);
                stats.removed_openings += int(removed.size());
                if (removed.empty()) break;
                ++stats.reoptimizations;
                if (++rounds > int(face.crossings.size()) + 4) break;
            }
        } catch (const std::runtime_error&) {
            // Walk corrupted mid-optimization (degenerate shared corners):
            // fall back to the detected geometry for this intersection.
            for (auto& [oid, anchors] : snapshot)
                if (opt.active(oid))
                    opt.place_anchors(oid, anchors.first, anchors.second);
        }
        // Growth may leave an opening parked on a shared shrink corner
        // (no feasible outward position). Those go back to their detected
        // anchors so later walks see disjoint cells; when even the detected
        // cell has been taken meanwhile, the opening is dropped.
        for (auto& [oid, anchors] : snapshot) {
            if (!opt.active(oid) || !opt.shares_anchor_cell(oid)) continue;
            opt.place_anchors(oid, anchors.first, anchors.second);
            if (opt.shares_anchor_cell(oid)) opt.deactivate(oid);
        }
    }

    std::vector<OpeningDetection> survivors;
    for (size_t i = 0; i < regions.openings.size(); ++i)
        if (opt.active(int(i))) survivors.push_back(regions.openings[i]);
    regions = build_regions(grid, walls, frontiers, std::move(survivors));
    return stats;
}

}  // namespace gridfast
