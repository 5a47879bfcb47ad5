#include "gridfast/openings.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace gridfast {

std::vector<ClassifiedGap> classify_gaps(const std::vector<MemberGap>& members) {
    std::vector<ClassifiedGap> out;
    out.reserve(members.size());
    for (size_t i = 0; i < members.size(); ++i) {
        const MemberGap& m = members[i];
        ClassifiedGap cg;
        cg.member = int(i);
        if (m.member_pos == 0)
            cg.inside = InsideKind::end_point;
        else if (m.member_pos == m.member_count - 1)
            cg.inside = InsideKind::start_point;
        else
            cg.inside = InsideKind::both;

        bool fwd = m.dir == DetDir::forward;
        switch (cg.inside) {
            case InsideKind::start_point:
                cg.category = fwd ? GapCategory::in_s : GapCategory::in_e;
                break;
            case InsideKind::end_point:
                cg.category = fwd ? GapCategory::in_e : GapCategory::in_s;
                break;
            case InsideKind::both:
                cg.category = GapCategory::in_b;
                break;
        }
        out.push_back(cg);
    }
    return out;
}

namespace {

struct CellSetIndex {
    std::unordered_set<Cell, CellHash> set;
    int rmin = 0, rmax = 0, cmin = 0, cmax = 0;

    explicit CellSetIndex(const std::vector<Cell>& cells) {
        rmin = cmin = std::numeric_limits<int>::max();
        rmax = cmax = std::numeric_limits<int>::min();
        for (const Cell& c : cells) {
            set.insert(c);
            rmin = std::min(rmin, c.row);
            rmax = std::max(rmax, c.row);
            cmin = std::min(cmin, c.col);
            cmax = std::max(cmax, c.col);
        }
    }
    bool bbox_near(const CellSetIndex& o, int pad) const {
        return rmin <= o.rmax + pad && o.rmin <= rmax + pad &&
               cmin <= o.cmax + pad && o.cmin <= cmax + pad;
    }
};

// Mean contact point of two gap cell sets that touch within one cell.
bool contact_point(const CellSetIndex& a, const std::vector<Cell>& b_cells,
                   Vec2& p) {
    double sx = 0, sy = 0;
    int n = 0;
    for (const Cell& cb : b_cells) {
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                Cell ca{cb.row + dr, cb.col + dc};
                if (!a.set.count(ca)) continue;
                Vec2 mid = (cell_center(ca) + cell_center(cb)) * 0.5;
                sx += mid.x;
                sy += mid.y;
                ++n;
            }
    }
    if (n == 0) return false;
    p = {sx / n, sy / n};
    return true;
}

Cell inside_cell(const MemberGap& m, InsideKind k) {
    return k == InsideKind::start_point ? m.cells.front() : m.cells.back();
}

// Wall crossing test for the open span of a segment; cells adjacent to the
// segment's anchor cells do not count.
bool segment_blocked(const WallSet& walls, const Cell& a, const Cell& b) {
    for (const Cell& c : supercover_line(cell_center(a), cell_center(b))) {
        if (chebyshev(c, a) <= 1 || chebyshev(c, b) <= 1) continue;
        if (walls.is_wall(c)) return true;
    }
    return false;
}

bool near_frontier(const std::unordered_set<Cell, CellHash>& frontier_cells,
                   const Cell& c) {
    for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
            if (frontier_cells.count(Cell{c.row + dr, c.col + dc})) return true;
    return false;
}

struct PairCandidate {
    int rec_s = -1;
    int rec_e = -1;
    Cell cell_s, cell_e;
    WallAnchor anc_s, anc_e;
    double length = 0.0;
};

}  // namespace

std::vector<OpeningDetection> pair_openings(
    const std::vector<ClassifiedGap>& classified,
    const std::vector<MemberGap>& members, const WallSet& walls,
    const std::vector<Frontier>& frontiers, const OccupancyGrid& grid,
    const OpeningParams& params, OpeningDebugCounts* dbg) {
    (void)grid;
    std::unordered_set<Cell, CellHash> frontier_cells;
    for (const Frontier& f : frontiers)
        for (const Cell& c : f.span) frontier_cells.insert(c);

    double anchor_radius = std::max(2.0, params.g_min / 2.0 + 1.0);

    // Records that survive frontier pruning.
    std::vector<int> active;
    std::vector<CellSetIndex> index;
    index.reserve(classified.size());
    for (size_t i = 0; i < classified.size(); ++i)
        index.emplace_back(members[classified[i].member].cells);
    for (size_t i = 0; i < classified.size(); ++i) {
        const ClassifiedGap& cg = classified[i];
        const MemberGap& m = members[cg.member];
        bool pruned = false;
        if (cg.inside == InsideKind::both) {
            pruned = near_frontier(frontier_cells, m.cells.front()) ||
                     near_frontier(frontier_cells, m.cells.back());
        } else {
            pruned = near_frontier(frontier_cells, inside_cell(m, cg.inside));
        }
        if (!pruned) active.push_back(int(i));
    }

    // Candidate pairs: one in_s gap and one in_e gap from different scan
    // frames whose cells touch.
    std::vector<PairCandidate> candidates;
    std::vector<uint8_t> had_candidate(classified.size(), 0);
    for (size_t ii = 0; ii < active.size(); ++ii) {
        int i = active[ii];
        if (classified[i].category != GapCategory::in_s) continue;
        const MemberGap& ms = members[classified[i].member];
        for (size_t jj = 0; jj < active.size(); ++jj) {
            int j = active[jj];
            if (classified[j].category != GapCategory::in_e) continue;
            const MemberGap& me = members[classified[j].member];
            if (ms.frame == me.frame) continue;
            if (!index[i].bbox_near(index[j], 1)) continue;
            Vec2 p;
            if (!contact_point(index[i], me.cells, p)) continue;

            Cell cs = inside_cell(ms, classified[i].inside);
            Cell ce = inside_cell(me, classified[j].inside);
            Vec2 a = cell_center(cs), b = cell_center(ce);
            Vec2 d = b - a;
            if (d.norm() < 1e-9) continue;
            Vec2 normal{d.y, -d.x};
            if (normal.dot(p - a) >= 0.0) continue;  // contact not behind

            WallAnchor as = walls.nearest(cs, anchor_radius);
            WallAnchor ae = walls.nearest(ce, anchor_radius);
            if (!as.valid() || !ae.valid()) continue;
            Cell asc = walls.walls[as.wall].cells[as.index];
            Cell aec = walls.walls[ae.wall].cells[ae.index];
            if (asc == aec) continue;
            if (segment_blocked(walls, asc, aec)) continue;

            PairCandidate pc;
            pc.rec_s = i;
            pc.rec_e = j;
            pc.cell_s = asc;
            pc.cell_e = aec;
            pc.anc_s = as;
            pc.anc_e = ae;
            pc.length = cell_dist(asc, aec);
            candidates.push_back(pc);
            had_candidate[i] = had_candidate[j] = 1;
        }
    }
    if (dbg) dbg->candidates = int(candidates.size());

    // Shortest pairings first. A gap end point anchors at most one opening;
    // the two ends of one gap may serve different openings.
    auto point_key = [&](int rec) {
        uint64_t k = member_gap_key(members[classified[rec].member]);
        return (k << 1) |
               (classified[rec].inside == InsideKind::start_point ? 0u : 1u);
    };
    std::sort(candidates.begin(), candidates.end(),
              [](const PairCandidate& a, const PairCandidate& b) {
                  if (a.length != b.length) return a.length < b.length;
                  if (a.rec_s != b.rec_s) return a.rec_s < b.rec_s;
                  return a.rec_e < b.rec_e;
              });
    std::unordered_set<uint64_t> consumed;
    std::vector<OpeningDetection> out;
    for (const PairCandidate& pc : candidates) {
        uint64_t ks = point_key(pc.rec_s);
        uint64_t ke = point_key(pc.rec_e);
        if (consumed.count(ks) || consumed.count(ke)) continue;
        consumed.insert(ks);
        consumed.insert(ke);
        OpeningDetection o;
        o.kind = OpeningKind::paired;
        o.source_frame = members[classified[pc.rec_s].member].frame;
        o.first = pc.cell_s;
        o.second = pc.cell_e;
        o.first_anchor = pc.anc_s;
        o.second_anchor = pc.anc_e;
        out.push_back(o);
    }
    if (dbg) dbg->paired = int(out.size());

    // Conversion of gaps that never saw a satisfying partner (in_b gaps
    // never pair by construction).
    std::unordered_set<uint64_t> converted_keys;
    for (int i : active) {
        const MemberGap& m = members[classified[i].member];
        uint64_t key = member_gap_key(m);
        if (consumed.count(key << 1) || consumed.count((key << 1) | 1))
            continue;
        if (converted_keys.count(key)) continue;
        if (had_candidate[i]) continue;
        bool any_candidate = false;
        for (int j : active)
            if (j != i && member_gap_key(members[classified[j].member]) == key &&
                had_candidate[j])
                any_candidate = true;
        if (any_candidate) continue;
        Cell c0 = m.cells.front(), c1 = m.cells.back();
        if (near_frontier(frontier_cells, c0) ||
            near_frontier(frontier_cells, c1))
            continue;
        WallAnchor a0 = walls.nearest(c0, anchor_radius);
        WallAnchor a1 = walls.nearest(c1, anchor_radius);
        if (!a0.valid() || !a1.valid()) continue;
        Cell ac0 = walls.walls[a0.wall].cells[a0.index];
        Cell ac1 = walls.walls[a1.wall].cells[a1.index];
        if (ac0 == ac1) continue;
        if (segment_blocked(walls, ac0, ac1)) continue;
        converted_keys.insert(key);
        OpeningDetection o;
        o.kind = OpeningKind::converted;
        o.source_frame = m.frame;
        o.first = ac0;
        o.second = ac1;
        o.first_anchor = a0;
        o.second_anchor = a1;
        out.push_back(o);
    }
    if (dbg) dbg->converted = int(out.size()) - dbg->paired;
    return out;
}

std::vector<OpeningDetection> frontier_openings(
    const std::vector<Frontier>& frontiers, const WallSet& walls) {
    std::vector<OpeningDetection> out;
    for (const Frontier& f : frontiers) {
        if (f.span.size() < 2) continue;
        OpeningDetection o;
        o.kind = OpeningKind::frontier;
        o.frontier = f.id;
        o.first = f.span.front();
        o.second = f.span.back();
        o.first_anchor = WallAnchor{f.wall, f.begin};
        o.second_anchor = WallAnchor{f.wall, f.end};
        (void)walls;
        out.push_back(o);
    }
    return out;
}

namespace {

bool openings_cross(const OpeningDetection& a, const OpeningDetection& b) {
    if (a.first == b.first || a.first == b.second || a.second == b.first ||
        a.second == b.second)
        return true;
    return segments_intersect(a.first_pt(), a.second_pt(), b.first_pt(),
                              b.second_pt());
}

bool share_wall(const OpeningDetection& a, const OpeningDetection& b) {
    int aw[2] = {a.first_anchor.wall, a.second_anchor.wall};
    int bw[2] = {b.first_anchor.wall, b.second_anchor.wall};
    for (int x : aw)
        for (int y : bw)
            if (x >= 0 && x == y) return true;
    return false;
}

int wall_index_distance(const WallSet& walls, const WallAnchor& a,
                        const WallAnchor& b) {
    if (a.wall != b.wall || a.wall < 0) return std::numeric_limits<int>::max();
    int n = int(walls.walls[a.wall].cells.size());
    int d = std::abs(a.index - b.index);
    return std::min(d, n - d);
}

struct EndPoint {
    Cell cell;
    WallAnchor anchor;
};

}  // namespace

std::vector<OpeningDetection> resolve_overlaps(
    std::vector<OpeningDetection> openings, const WallSet& walls,
    const OpeningParams& params, OpeningDebugCounts* dbg) {
    auto alive = [&](const OpeningDetection& o) {
        return o.status != OpeningStatus::removed;
    };
    auto kill = [&](OpeningDetection& o) {
        o.status = OpeningStatus::removed;
        if (dbg) ++dbg->overlap_removed;
    };

    size_t guard = 4 * openings.size() * openings.size() + 16;
    while (guard-- > 0) {
        int i1 = -1, i2 = -1;
        for (size_t i = 0; i < openings.size() && i1 < 0; ++i) {
            if (!alive(openings[i])) continue;
            for (size_t j = i + 1; j < openings.size(); ++j) {
                if (!alive(openings[j])) continue;
                if (openings_cross(openings[i], openings[j])) {
                    i1 = int(i);
                    i2 = int(j);
                    break;
                }
            }
        }
        if (i1 < 0) break;
        OpeningDetection& o1 = openings[i1];
        OpeningDetection& o2 = openings[i2];

        bool resolved = false;
        if (share_wall(o1, o2)) {
            EndPoint a1{o1.first, o1.first_anchor}, b1{o1.second, o1.second_anchor};
            EndPoint a2{o2.first, o2.first_anchor}, b2{o2.second, o2.second_anchor};
            struct Variant {
                EndPoint p1a, p1b, p2a, p2b;
                int swapped_dist;
            };
            std::vector<Variant> variants;
            // Exchange second end points.
            variants.push_back({a1, b2, a2, b1,
                                wall_index_distance(walls, b1.anchor, b2.anchor)});
            // Regroup: starts together, ends together.
            variants.push_back({a1, a2, b1, b2,
                                wall_index_distance(walls, b1.anchor, a2.anchor)});
            int best = -1;
            for (size_t v = 0; v < variants.size(); ++v) {
                const Variant& va = variants[v];
                Cell c[4] = {va.p1a.cell, va.p1b.cell, va.p2a.cell, va.p2b.cell};
                bool distinct = true;
                for (int x = 0; x < 4; ++x)
                    for (int y = x + 1; y < 4; ++y)
                        if (c[x] == c[y]) distinct = false;
                if (!distinct) continue;
                double l1 = cell_dist(va.p1a.cell, va.p1b.cell);
                double l2 = cell_dist(va.p2a.cell, va.p2b.cell);
                if (l1 < params.r_min_cells || l2 < params.r_min_cells) continue;
                if (segments_intersect(cell_center(va.p1a.cell),
                                       cell_center(va.p1b.cell),
                                       cell_center(va.p2a.cell),
                                       cell_center(va.p2b.cell)))
                    continue;
                if (best < 0 ||
                    variants[v].swapped_dist < variants[best].swapped_dist)
                    best = int(v);
            }
            if (best >= 0) {
                const Variant& va = variants[best];
                o1.first = va.p1a.cell;
                o1.first_anchor = va.p1a.anchor;
                o1.second = va.p1b.cell;
                o1.second_anchor = va.p1b.anchor;
                o2.first = va.p2a.cell;
                o2.first_anchor = va.p2a.anchor;
                o2.second = va.p2b.cell;
                o2.second_anchor = va.p2b.anchor;
                resolved = true;
                if (dbg) ++dbg->overlap_swapped;
            }
        }
        if (!resolved) {
            if (o1.length_cells() >= o2.length_cells())
                kill(o1);
            else
                kill(o2);
        }
    }

    std::vector<OpeningDetection> out;
    for (OpeningDetection& o : openings)
        if (alive(o)) out.push_back(o);
    return out;
}

std::vector<OpeningDetection> detect_openings(
    const OccupancyGrid& grid, const WallSet& walls,
    const std::vector<Frontier>& frontiers,
    const std::vector<MemberGap>& members, const OpeningParams& params,
    OpeningDebugCounts* dbg) {
    auto classified = classify_gaps(members);
    std::vector<OpeningDetection> all =
        pair_openings(classified, members, walls, frontiers, grid, params, dbg);
    auto fo = frontier_openings(frontiers, walls);
    if (dbg) dbg->frontier = int(fo.size());
    all.insert(all.end(), fo.begin(), fo.end());

    // Too narrow for the robot.
    std::vector<OpeningDetection> sized;
    for (OpeningDetection& o : all) {
        if (o.kind != OpeningKind::frontier &&
            o.length_cells() < params.r_min_cells) {
            if (dbg) ++dbg->dropped_short;
            continue;
        }
        sized.push_back(std::move(o));
    }

    // Multi-direction scanning re-detects the same doorway; merge near
    // duplicates on the same walls, shortest kept.
    std::sort(sized.begin(), sized.end(),
              [](const OpeningDetection& a, const OpeningDetection& b) {
                  double la = a.length_cells(), lb = b.length_cells();
                  if (la != lb) return la < lb;
                  if (!(a.first == b.first)) return a.first < b.first;
                  return a.second < b.second;
              });
    std::vector<OpeningDetection> unique;
    double dup_radius = params.g_min / 2.0;
    for (const OpeningDetection& o : sized) {
        bool dup = false;
        for (const OpeningDetection& k : unique) {
            if (!share_wall(o, k)) continue;
            bool direct = cell_dist(o.first, k.first) <= dup_radius &&
                          cell_dist(o.second, k.second) <= dup_radius;
            bool flipped = cell_dist(o.first, k.second) <= dup_radius &&
                           cell_dist(o.second, k.first) <= dup_radius;
            if (direct || flipped) {
                dup = true;
                break;
            }
        }
        if (dup) {
            if (dbg) ++dbg->merged_duplicates;
            continue;
        }
        unique.push_back(o);
    }

    auto resolved = resolve_overlaps(std::move(unique), walls, params, dbg);

    std::sort(resolved.begin(), resolved.end(),
              [](const OpeningDetection& a, const OpeningDetection& b) {
                  if (!(a.first == b.first)) return a.first < b.first;
                  return a.second < b.second;
              });
    for (size_t i = 0; i < resolved.size(); ++i) {
        resolved[i].id = int(i);
        resolved[i].status = OpeningStatus::confirmed;
    }
    return resolved;
}

}  // namespace gridfast
