#pragma once

#include <vector>

#include "gridfast/gaps.hpp"
#include "gridfast/walls.hpp"

namespace gridfast {

enum class InsideKind { start_point, end_point, both };
enum class GapCategory { in_s, in_e, in_b };

// Detection member with its inside point(s) and pairing category.
struct ClassifiedGap {
    int member = -1;  // index into the member list
    InsideKind inside = InsideKind::both;
    GapCategory category = GapCategory::in_b;
};

// First / middle / last member position decides the inside point; the
// detection direction decides the category.
std::vector<ClassifiedGap> classify_gaps(const std::vector<MemberGap>& members);

enum class OpeningKind { paired, converted, frontier };
enum class OpeningStatus { candidate, confirmed, removed };

// Wall-anchored point pair marking an entry of an intersection. `first` is
// the start-side anchor; walking first -> second the junction lies to the
// right.
struct OpeningDetection {
    int id = -1;
    OpeningKind kind = OpeningKind::paired;
    OpeningStatus status = OpeningStatus::candidate;
    int source_frame = -1;
    int frontier = -1;  // frontier id for frontier openings
    WallAnchor first_anchor, second_anchor;
    Cell first, second;

    double length_cells() const { return cell_dist(first, second); }
    Vec2 first_pt() const { return cell_center(first); }
    Vec2 second_pt() const { return cell_center(second); }
    Vec2 midpoint() const { return (first_pt() + second_pt()) * 0.5; }
};

struct OpeningParams {
    double r_min_cells = 6.0;
    int g_min = 6;
};

struct OpeningDebugCounts {
    int candidates = 0;
    int paired = 0;
    int converted = 0;
    int frontier = 0;
    int dropped_short = 0;
    int merged_duplicates = 0;
    int overlap_removed = 0;
    int overlap_swapped = 0;
};

// Pairs classified gaps into openings:
//   P1 one gap in in_s and one in in_e (different scan frames, cell sets
//      within one cell of each other),
//   P2 the shared point lies behind the start->end inside-point line,
//   P3 the connecting segment crosses no wall,
//   P4 shortest pairings win, one per physical gap.
// Gaps that never saw a satisfying partner and all in_b gaps convert to
// openings across their own end points unless an end touches a frontier.
std::vector<OpeningDetection> pair_openings(
    const std::vector<ClassifiedGap>& classified,
    const std::vector<MemberGap>& members, const WallSet& walls,
    const std::vector<Frontier>& frontiers, const OccupancyGrid& grid,
    const OpeningParams& params, OpeningDebugCounts* dbg = nullptr);

// One opening per frontier, anchored at its span ends.
std::vector<OpeningDetection> frontier_openings(
    const std::vector<Frontier>& frontiers, const WallSet& walls);

// Removes crossings: overlapping openings sharing a wall have their end
// points swapped, pairs on disjoint walls lose the longer opening. Output
// openings are pairwise non-crossing.
std::vector<OpeningDetection> resolve_overlaps(
    std::vector<OpeningDetection> openings, const WallSet& walls,
    const OpeningParams& params, OpeningDebugCounts* dbg = nullptr);

// Full opening stage: classification, frontier pruning and openings,
// pairing, conversion, duplicate merge, length filter, overlap resolution.
std::vector<OpeningDetection> detect_openings(
    const OccupancyGrid& grid, const WallSet& walls,
    const std::vector<Frontier>& frontiers,
    const std::vector<MemberGap>& members, const OpeningParams& params,
    OpeningDebugCounts* dbg = nullptr);

}  // namespace gridfast
