#include "gridfast/gaps.hpp"

#include <algorithm>
#include <set>

namespace gridfast {

namespace {

// Segments one row given cell states and a footprint predicate.
template <typename StateFn, typename InteriorFn>
void segment_one_row(int row, int cols, StateFn state, InteriorFn interior,
                     int g_min, int f_uk, std::vector<Gap>& out) {
    int c = 0;
    while (c < cols) {
        if (state(c) != CellState::free) {
            ++c;
            continue;
        }
        Gap gap;
        gap.row = row;
        gap.start_col = c;
        gap.clipped = c == 0 || !interior(c - 1);
        int last_free = c;
        int cc = c + 1;
        while (cc < cols) {
            CellState s = state(cc);
            if (s == CellState::free) {
                last_free = cc;
                ++cc;
                continue;
            }
            if (s == CellState::occupied) break;
            // Unknown run: absorb when interior, short and followed by free.
            int run_start = cc;
            bool exterior_run = false;
            while (cc < cols && state(cc) == CellState::unknown) {
                if (!interior(cc)) exterior_run = true;
                ++cc;
            }
            int run_len = cc - run_start;
            bool followed_by_free = cc < cols && state(cc) == CellState::free;
            if (followed_by_free && run_len <= f_uk && !exterior_run) continue;
            cc = run_start;
            break;
        }
        gap.end_col = last_free;
        if (cc >= cols) {
            gap.clipped = true;
        } else if (state(cc) == CellState::unknown && !interior(cc)) {
            gap.clipped = true;
        }
        gap.traversable = gap.end_col - gap.start_col >= g_min;
        out.push_back(gap);
        c = std::max(cc, last_free + 1);
    }
}

}  // namespace

const Gap& FrameScan::gap(int flat_id) const {
    auto it = std::upper_bound(row_offset.begin(), row_offset.end(), flat_id);
    int r = int(it - row_offset.begin()) - 1;
    return rows[r][flat_id - row_offset[r]];
}

std::vector<std::vector<Gap>> segment_rows(const OccupancyGrid& grid, int g_min,
                                           int f_uk, kernels::Exec exec) {
    std::vector<std::vector<Gap>> rows(grid.rows);
    auto body = [&](int r) {
        segment_one_row(
            r, grid.cols, [&](int c) { return grid.at(r, c); },
            [&](int) { return true; }, g_min, f_uk, rows[r]);
    };
    if (exec == kernels::Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int r = 0; r < grid.rows; ++r) body(r);
    } else {
        for (int r = 0; r < grid.rows; ++r) body(r);
    }
    return rows;
}

std::vector<std::vector<Gap>> segment_rows(const kernels::RotatedGrid& rg,
                                           int g_min, int f_uk,
                                           kernels::Exec exec) {
    const OccupancyGrid& grid = rg.grid;
    std::vector<std::vector<Gap>> rows(grid.rows);
    auto body = [&](int r) {
        segment_one_row(
            r, grid.cols, [&](int c) { return grid.at(r, c); },
            [&](int c) { return rg.is_interior(r, c); }, g_min, f_uk, rows[r]);
    };
    if (exec == kernels::Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int r = 0; r < grid.rows; ++r) body(r);
    } else {
        for (int r = 0; r < grid.rows; ++r) body(r);
    }
    return rows;
}

namespace {

inline int overlap_count(const Gap& a, const Gap& b) {
    return std::min(a.end_col, b.end_col) - std::max(a.start_col, b.start_col) +
           1;
}

}  // namespace

std::vector<std::vector<int>> link_rows(std::vector<Gap>& row_i,
                                        std::vector<Gap>& row_adj, int g_min,
                                        std::vector<Gap>* fragments) {
    std::vector<std::vector<int>> links(row_i.size());
    for (size_t a = 0; a < row_i.size(); ++a) {
        if (!row_i[a].traversable) continue;
        for (size_t b = 0; b < row_adj.size(); ++b) {
            if (!row_adj[b].traversable) continue;
            int ov = overlap_count(row_i[a], row_adj[b]);
            if (ov >= g_min) {
                links[a].push_back(int(b));
            } else if (ov > 0) {
                // Too narrow to traverse: cut the shared columns from both
                // gaps and keep the cutouts as non-traversable runs.
                int os = std::max(row_i[a].start_col, row_adj[b].start_col);
                int oe = std::min(row_i[a].end_col, row_adj[b].end_col);
                for (Gap* g : {&row_i[a], &row_adj[b]}) {
                    if (fragments) {
                        Gap frag = *g;
                        frag.start_col = os;
                        frag.end_col = oe;
                        frag.traversable = false;
                        frag.clipped = false;
                        fragments->push_back(frag);
                    }
                    if (g->start_col >= os && g->end_col <= oe) {
                        // Fully consumed; mark dead.
                        g->traversable = false;
                        g->end_col = g->start_col - 1;
                    } else if (os > g->start_col && oe < g->end_col) {
                        // Interior cut; keep the longer side.
                        int left = os - g->start_col;
                        int right = g->end_col - oe;
                        if (left >= right)
                            g->end_col = os - 1;
                        else
                            g->start_col = oe + 1;
                    } else if (os <= g->start_col) {
                        g->start_col = oe + 1;
                    } else {
                        g->end_col = os - 1;
                    }
                    g->traversable =
                        g->end_col - g->start_col >= g_min && g->traversable;
                }
            }
        }
    }
    return links;
}

void link_frame(FrameScan& fs, int g_min) {
    int nrows = int(fs.rows.size());
    std::vector<std::vector<std::vector<int>>> fwd_local(nrows);
    for (int r = 0; r + 1 < nrows; ++r)
        fwd_local[r] = link_rows(fs.rows[r], fs.rows[r + 1], g_min, &fs.fragments);
    if (nrows > 0) fwd_local[nrows - 1].resize(fs.rows[nrows - 1].size());

    // Trimming may have shrunk gaps after their links were made; keep only
    // pairs that still overlap enough and are still traversable.
    for (int r = 0; r + 1 < nrows; ++r) {
        for (size_t k = 0; k < fs.rows[r].size(); ++k) {
            auto& lst = fwd_local[r][k];
            std::vector<int> keep;
            for (int b : lst) {
                const Gap& ga = fs.rows[r][k];
                const Gap& gb = fs.rows[r + 1][b];
                if (ga.traversable && gb.traversable &&
                    overlap_count(ga, gb) >= g_min)
                    keep.push_back(b);
            }
            lst = std::move(keep);
        }
    }

    fs.row_offset.assign(nrows + 1, 0);
    for (int r = 0; r < nrows; ++r)
        fs.row_offset[r + 1] = fs.row_offset[r] + int(fs.rows[r].size());
    int total = fs.row_offset[nrows];
    fs.fwd.assign(total, {});
    fs.bwd.assign(total, {});
    for (int r = 0; r + 1 < nrows; ++r) {
        for (size_t k = 0; k < fs.rows[r].size(); ++k) {
            int fa = fs.flat(r, int(k));
            for (int b : fwd_local[r][k]) {
                int fb = fs.flat(r + 1, b);
                fs.fwd[fa].push_back(fb);
                fs.bwd[fb].push_back(fa);
            }
        }
    }
}

std::vector<GapDetection> find_gap_detections(const FrameScan& fs) {
    std::vector<GapDetection> out;
    int total = fs.row_offset.empty() ? 0 : fs.row_offset.back();
    for (int f = 0; f < total; ++f) {
        if (fs.fwd[f].size() >= 2) {
            GapDetection d;
            d.dir = DetDir::forward;
            d.anchor = f;
            d.members = fs.fwd[f];
            out.push_back(std::move(d));
        }
        if (fs.bwd[f].size() >= 2) {
            GapDetection d;
            d.dir = DetDir::backward;
            d.anchor = f;
            d.members = fs.bwd[f];
            out.push_back(std::move(d));
        }
    }
    // Members are built in k order, which is start_col order already; the
    // outer loop is (row, start_col, direction) ordered by construction.
    return out;
}

int filter_small_openings(OccupancyGrid& grid,
                          const std::vector<std::vector<Cell>>& gap_cells) {
    const OccupancyGrid snapshot = grid;
    std::vector<Cell> to_occ, to_unk;
    for (const auto& cells : gap_cells) {
        bool touches_occ = false;
        for (const Cell& c : cells) {
            if (has_neighbor8(snapshot, c, CellState::occupied)) {
                touches_occ = true;
                break;
            }
        }
        for (const Cell& c : cells) {
            if (snapshot.at(c) != CellState::free) continue;
            (touches_occ ? to_occ : to_unk).push_back(c);
        }
    }
    int changed = 0;
    for (const Cell& c : to_unk)
        if (grid.at(c) == CellState::free) {
            grid.set(c, CellState::unknown);
            ++changed;
        }
    for (const Cell& c : to_occ)
        if (grid.at(c) != CellState::occupied) {
            if (grid.at(c) == CellState::free) ++changed;
            grid.set(c, CellState::occupied);
        }
    return changed;
}

namespace {

// Rotated-frame gap cells mapped back to original-frame cells, unsnapped.
std::vector<Cell> backmap_span(const ScanFrame& frame, const OccupancyGrid& orig,
                               int row, int c0, int c1) {
    std::vector<Cell> cells;
    cells.reserve(size_t(c1 - c0 + 1));
    for (int c = c0; c <= c1; ++c) {
        Vec2 p = frame.to_original({c + 0.5, row + 0.5});
        Cell cc = point_cell(p);
        if (!orig.in_bounds(cc)) continue;
        if (cells.empty() || !(cells.back() == cc)) cells.push_back(cc);
    }
    return cells;
}

// Snap order: exact cell, then 4-neighbors, then diagonals.
bool snap_free(const OccupancyGrid& grid, Cell& c) {
    if (grid.is_free(c)) return true;
    static const int order[8][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0},
                                    {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    for (auto& d : order) {
        Cell n{c.row + d[0], c.col + d[1]};
        if (grid.is_free(n)) {
            c = n;
            return true;
        }
    }
    return false;
}

FrameScan scan_frame(const OccupancyGrid& grid, int angle_index,
                     const ScanConfig& cfg, kernels::RotatedGrid* keep_rotated) {
    FrameScan fs;
    fs.frame = make_scan_frame(grid, angle_index, cfg.n_dir);
    if (angle_index == 0) {
        fs.rows = segment_rows(grid, cfg.g_min, cfg.f_uk, cfg.exec);
    } else {
        kernels::RotatedGrid rg = kernels::rotate_grid(grid, fs.frame, cfg.exec);
        fs.rows = segment_rows(rg, cfg.g_min, cfg.f_uk, cfg.exec);
        if (keep_rotated) *keep_rotated = std::move(rg);
    }
    link_frame(fs, cfg.g_min);
    return fs;
}

}  // namespace

ScanOutput scan_all_directions(const OccupancyGrid& grid, const ScanConfig& cfg) {
    ScanOutput out;
    out.filtered = grid;

    // Pass 1: remove non-traversable runs, iterating until the map is
    // stable. Only lattice-exact frames (0 and 90 degrees) may edit the
    // grid: a run in a resampled frame has no 1:1 cell footprint, and
    // editing through one bevels every convex corner, which the opposite
    // diagonal frame then cuts again without end. Runs bounded by the
    // lattice border or rotation padding are kept as well; those are
    // clipped scans, not map content.
    while (true) {
        std::vector<std::vector<Cell>> nt_cells;
        for (int k = 0; k < cfg.n_dir; ++k) {
            ScanFrame probe = make_scan_frame(out.filtered, k, cfg.n_dir);
            if (probe.sin_t != 0.0 && probe.cos_t != 0.0) continue;
            FrameScan fs = scan_frame(out.filtered, k, cfg, nullptr);
            auto collect = [&](const Gap& g) {
                if (g.end_col < g.start_col) return;
                if (g.traversable || g.clipped) return;
                auto cells = backmap_span(fs.frame, out.filtered, g.row,
                                          g.start_col, g.end_col);
                if (!cells.empty()) nt_cells.push_back(std::move(cells));
            };
            for (const auto& row : fs.rows)
                for (const Gap& g : row) collect(g);
            for (const Gap& g : fs.fragments) collect(g);
        }
        int changed = filter_small_openings(out.filtered, nt_cells);
        out.filtered_cells += changed;
        ++out.filter_iterations;
        if (changed == 0) break;
    }

    // Pass 2: scan the stable grid and back-map detection members.
    for (int k = 0; k < cfg.n_dir; ++k) {
        FrameScan fs = scan_frame(out.filtered, k, cfg, nullptr);
        fs.detections = find_gap_detections(fs);
        const ScanFrame& fr = fs.frame;
        Vec2 row_dir{fr.cos_t, -fr.sin_t};
        Vec2 next_row_dir{fr.sin_t, fr.cos_t};
        for (size_t d = 0; d < fs.detections.size(); ++d) {
            const GapDetection& det = fs.detections[d];
            int count = int(det.members.size());
            for (int mi = 0; mi < count; ++mi) {
                const Gap& g = fs.gap(det.members[mi]);
                MemberGap m;
                m.frame = k;
                m.det = int(d);
                m.member_pos = mi;
                m.member_count = count;
                m.dir = det.dir;
                m.gap_row = g.row;
                m.gap_start = g.start_col;
                m.gap_end = g.end_col;
                auto raw = backmap_span(fr, out.filtered, g.row, g.start_col,
                                        g.end_col);
                for (Cell c : raw) {
                    if (!snap_free(out.filtered, c)) continue;
                    if (m.cells.empty() || !(m.cells.back() == c))
                        m.cells.push_back(c);
                }
                if (m.cells.empty()) continue;
                m.row_dir = {row_dir.x, row_dir.y};
                double sgn = det.dir == DetDir::forward ? -1.0 : 1.0;
                m.toward_anchor = {next_row_dir.x * sgn, next_row_dir.y * sgn};
                out.members.push_back(std::move(m));
            }
        }
        out.frames.push_back(std::move(fs));
    }

    // Drop detections reduced below two usable members by snapping.
    std::vector<MemberGap> kept;
    for (size_t i = 0; i < out.members.size();) {
        size_t j = i;
        while (j < out.members.size() && out.members[j].frame == out.members[i].frame &&
               out.members[j].det == out.members[i].det)
            ++j;
        if (j - i >= 2) {
            int count = int(j - i);
            for (size_t t = i; t < j; ++t) {
                MemberGap m = out.members[t];
                m.member_pos = int(t - i);
                m.member_count = count;
                kept.push_back(std::move(m));
            }
        }
        i = j;
    }
    out.members = std::move(kept);
    return out;
}

}  // namespace gridfast
