#pragma once

#include <vector>

#include "gridfast/grid.hpp"
#include "gridfast/kernels.hpp"

namespace gridfast {

// Maximal free run on one scan row. A run may absorb interior groups of at
// most f_uk unknown cells; it always starts and ends on a free cell.
// Traversable <=> end_col - start_col >= g_min.
struct Gap {
    int row = 0;
    int start_col = 0;
    int end_col = 0;
    bool traversable = false;
    // Run bounded by the lattice border or rotation padding rather than by
    // map content; such runs are never filtered away.
    bool clipped = false;
};

enum class DetDir { forward, backward };

// A gap linked to >= 2 traversable gaps on an adjacent row.
struct GapDetection {
    DetDir dir = DetDir::forward;
    int anchor = -1;              // flat gap index
    std::vector<int> members;     // flat indices on the adjacent row, by start_col
};

// Frame-local scan state: gaps per row plus adjacency links by flat index.
struct FrameScan {
    ScanFrame frame;
    std::vector<std::vector<Gap>> rows;
    std::vector<Gap> fragments;           // non-traversable excision leftovers
    std::vector<int> row_offset;          // flat index of rows[r][0]
    std::vector<std::vector<int>> fwd;    // flat -> flat links to row+1
    std::vector<std::vector<int>> bwd;    // flat -> flat links to row-1
    std::vector<GapDetection> detections;

    int flat(int row, int k) const { return row_offset[row] + k; }
    const Gap& gap(int flat_id) const;
};

// Segments every row of a grid. Rows are independent; the parallel and
// serial paths produce identical output.
std::vector<std::vector<Gap>> segment_rows(const OccupancyGrid& grid, int g_min,
                                           int f_uk,
                                           kernels::Exec exec = kernels::Exec::parallel);
std::vector<std::vector<Gap>> segment_rows(const kernels::RotatedGrid& rg,
                                           int g_min, int f_uk,
                                           kernels::Exec exec = kernels::Exec::parallel);

// Links the traversable gaps of two adjacent rows. A pair is linked when its
// column overlap spans >= g_min cells. Pairs with a smaller positive overlap
// have the overlapping columns cut out of both gaps; the cutouts are emitted
// into `fragments` as non-traversable gaps. Returns per-gap link lists
// (indices into row_adj).
std::vector<std::vector<int>> link_rows(std::vector<Gap>& row_i,
                                        std::vector<Gap>& row_adj, int g_min,
                                        std::vector<Gap>* fragments = nullptr);

// Full per-frame linking: every adjacent row pair, then a re-verification
// sweep that drops links whose overlap fell under g_min after trimming.
void link_frame(FrameScan& fs, int g_min);

// One detection per (gap, direction) whose link group has >= 2 members,
// ordered by (row, start_col, direction).
std::vector<GapDetection> find_gap_detections(const FrameScan& fs);

// Applies the small-opening rule to the given gap cell lists (original
// frame): a gap's free cells become occupied when the gap touches an
// occupied cell in the snapshot grid, unknown otherwise. Returns the number
// of changed cells.
int filter_small_openings(OccupancyGrid& grid,
                          const std::vector<std::vector<Cell>>& gap_cells);

// Back-mapped member gap of a detection, original-frame geometry.
struct MemberGap {
    int frame = 0;
    int det = 0;                 // detection ordinal within the frame
    int member_pos = 0;          // position within the detection
    int member_count = 0;
    DetDir dir = DetDir::forward;
    int gap_row = 0;             // rotated-frame identity of the gap
    int gap_start = 0;
    int gap_end = 0;
    std::vector<Cell> cells;     // ordered along the scan row, snapped free
    Vec2 row_dir;                // original-frame direction of +columns
    Vec2 toward_anchor;          // original-frame direction toward the anchor row
};

struct ScanConfig {
    int n_dir = 4;
    int g_min = 6;
    int f_uk = 3;
    kernels::Exec exec = kernels::Exec::parallel;
};

struct ScanOutput {
    OccupancyGrid filtered;
    std::vector<FrameScan> frames;    // computed on the filtered grid
    std::vector<MemberGap> members;
    int filter_iterations = 0;
    int filtered_cells = 0;
};

// Multi-direction scan: iterates the segment->filter pass over all frames
// until the grid is stable, then re-scans the stable grid to extract gap
// detections and back-map their members into the original frame.
ScanOutput scan_all_directions(const OccupancyGrid& grid, const ScanConfig& cfg);

// Physical identity of a member gap (frame + rotated-frame extents).
inline uint64_t member_gap_key(const MemberGap& m) {
    return (uint64_t(uint16_t(m.frame)) << 48) ^
           (uint64_t(uint16_t(m.gap_row)) << 32) ^
           (uint64_t(uint16_t(m.gap_start)) << 16) ^
           uint64_t(uint16_t(m.gap_end));
}

}  // namespace gridfast
