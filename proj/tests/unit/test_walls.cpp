#include <queue>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "gridfast/gaps.hpp"
#include "gridfast/walls.hpp"
#include "helpers.hpp"

using namespace gridfast;
using gridfast::test::from_ascii;

namespace {

std::vector<MemberGap> scan_members(const OccupancyGrid& g, int g_min = 4) {
    ScanConfig cfg{4, g_min, 3, kernels::Exec::serial};
    return scan_all_directions(g, cfg).members;
}

// Brute-force oracle: all boundary cells 8-connected (through boundary
// cells) to any traced wall start.
std::set<Cell> boundary_component(const OccupancyGrid& g,
                                  const std::vector<Cell>& seeds) {
    std::set<Cell> visited;
    std::queue<Cell> q;
    for (const Cell& s : seeds)
        if (is_boundary_free(g, s) && visited.insert(s).second) q.push(s);
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        for (auto& d : kNbr8) {
            Cell n{c.row + d[0], c.col + d[1]};
            if (!is_boundary_free(g, n)) continue;
            if (visited.insert(n).second) q.push(n);
        }
    }
    return visited;
}

}  // namespace

TEST_CASE("walls trace both room and pillar loops") {
    // 40x40: room with an entry corridor (gives detections) and a pillar.
    std::vector<std::string> art(40, std::string(40, '#'));
    for (int r = 5; r < 35; ++r)
        for (int c = 5; c < 35; ++c) art[r][c] = '.';
    for (int r = 17; r < 23; ++r)
        for (int c = 0; c < 5; ++c) art[r][c] = '.';  // corridor to the edge
    for (int r = 15; r < 20; ++r)
        for (int c = 22; c < 27; ++c) art[r][c] = '#';  // pillar
    auto g = from_ascii(art);

    auto members = scan_members(g);
    REQUIRE(!members.empty());
    WallSet ws = trace_walls(g, members);
    CHECK(ws.walls.size() == 2);

    for (const Wall& w : ws.walls) {
        REQUIRE(!w.cells.empty());
        // Definition check: free cells with a non-free 8-neighbor, chained.
        for (size_t i = 0; i < w.cells.size(); ++i) {
            CHECK(is_boundary_free(g, w.cells[i]));
            const Cell& a = w.cells[i];
            const Cell& b = w.cells[(i + 1) % w.cells.size()];
            CHECK(chebyshev(a, b) <= 1);
        }
    }

    // Completeness against the brute-force boundary flood.
    std::vector<Cell> starts;
    for (const Wall& w : ws.walls) starts.push_back(w.cells.front());
    std::set<Cell> oracle = boundary_component(g, starts);
    std::set<Cell> traced;
    for (const Wall& w : ws.walls)
        traced.insert(w.cells.begin(), w.cells.end());
    CHECK(traced == oracle);
}

TEST_CASE("a convex room without detections has no walls") {
    std::vector<std::string> art(20, std::string(20, '#'));
    for (int r = 2; r < 18; ++r)
        for (int c = 2; c < 18; ++c) art[r][c] = '.';
    auto g = from_ascii(art);
    auto members = scan_members(g);
    CHECK(members.empty());
    WallSet ws = trace_walls(g, members);
    CHECK(ws.walls.empty());
}

TEST_CASE("an L corridor yields one wall loop") {
    std::vector<std::string> art(30, std::string(30, '#'));
    for (int r = 4; r < 12; ++r)
        for (int c = 4; c < 26; ++c) art[r][c] = '.';
    for (int r = 4; r < 26; ++r)
        for (int c = 18; c < 26; ++c) art[r][c] = '.';
    auto g = from_ascii(art);
    auto members = scan_members(g);
    WallSet ws = trace_walls(g, members);
    CHECK(ws.walls.size() == 1);

    std::vector<Cell> starts{ws.walls[0].cells.front()};
    std::set<Cell> oracle = boundary_component(g, starts);
    std::set<Cell> traced(ws.walls[0].cells.begin(), ws.walls[0].cells.end());
    CHECK(traced == oracle);
}

TEST_CASE("small enclosed objects are filled away") {
    std::vector<std::string> art(40, std::string(40, '#'));
    for (int r = 5; r < 35; ++r)
        for (int c = 5; c < 35; ++c) art[r][c] = '.';
    for (int r = 17; r < 23; ++r)
        for (int c = 0; c < 5; ++c) art[r][c] = '.';
    for (int r = 18; r < 21; ++r)
        for (int c = 24; c < 27; ++c) art[r][c] = '#';  // 3x3 blob
    auto g = from_ascii(art);
    auto members = scan_members(g);
    WallSet ws = trace_walls(g, members);
    REQUIRE(ws.walls.size() == 2);

    SUBCASE("threshold 20 removes the blob") {
        auto stats = remove_small_objects(g, ws, members, 20);
        CHECK(stats.removed_walls == 1);
        CHECK(ws.walls.size() == 1);
        for (int r = 18; r < 21; ++r)
            for (int c = 24; c < 27; ++c)
                CHECK(g.at(r, c) == CellState::free);
    }
    SUBCASE("threshold 0 removes nothing") {
        auto stats = remove_small_objects(g, ws, members, 0);
        CHECK(stats.removed_walls == 0);
        CHECK(ws.walls.size() == 2);
        CHECK(g.at(19, 25) == CellState::occupied);
    }
}

TEST_CASE("large obstacles survive the object filter") {
    std::vector<std::string> art(50, std::string(50, '#'));
    for (int r = 5; r < 45; ++r)
        for (int c = 5; c < 45; ++c) art[r][c] = '.';
    for (int r = 22; r < 28; ++r)
        for (int c = 0; c < 5; ++c) art[r][c] = '.';
    // 10x10 obstacle: its wall has well over 20 occupied-adjacent cells.
    for (int r = 20; r < 30; ++r)
        for (int c = 25; c < 35; ++c) art[r][c] = '#';
    auto g = from_ascii(art);
    auto members = scan_members(g);
    WallSet ws = trace_walls(g, members);
    REQUIRE(ws.walls.size() == 2);
    auto stats = remove_small_objects(g, ws, members, 20);
    CHECK(stats.removed_walls == 0);
    CHECK(g.at(25, 30) == CellState::occupied);
}

TEST_CASE("frontier detection needs r_min of unknown-adjacent wall") {
    SUBCASE("an open corridor end is a frontier") {
        std::vector<std::string> art(24, std::string(24, '#'));
        for (int r = 7; r < 17; ++r)
            for (int c = 0; c < 24; ++c) art[r][c] = '.';
        for (int r = 0; r < 24; ++r)
            for (int c = 8; c < 16; ++c) art[r][c] = '.';  // crossing arm
        auto g = from_ascii(art);
        auto members = scan_members(g, 6);
        WallSet ws = trace_walls(g, members);
        REQUIRE(!ws.walls.empty());
        auto frontiers = detect_frontiers(ws, RobotSpec{0.6}, g);
        CHECK(!frontiers.empty());
        for (const Frontier& f : frontiers) {
            CHECK(cell_dist(f.span.front(), f.span.back()) >= 6.0);
            for (const Cell& c : f.span)
                CHECK(has_neighbor4(g, c, CellState::unknown));
        }
    }
    SUBCASE("a short nick is not a frontier") {
        std::vector<std::string> art(30, std::string(30, '#'));
        for (int r = 5; r < 25; ++r)
            for (int c = 5; c < 25; ++c) art[r][c] = '.';
        for (int r = 13; r < 17; ++r)
            for (int c = 0; c < 5; ++c) art[r][c] = '.';
        // 4-cell unknown nick in the east wall: below r_min = 6 cells.
        for (int r = 13; r < 17; ++r) art[r][25] = '?';
        auto g = from_ascii(art);
        auto members = scan_members(g);
        WallSet ws = trace_walls(g, members);
        auto frontiers = detect_frontiers(ws, RobotSpec{0.6}, g);
        CHECK(frontiers.empty());
    }
    SUBCASE("a fully explored map has no frontiers") {
        std::vector<std::string> art(30, std::string(30, '#'));
        for (int r = 5; r < 25; ++r)
            for (int c = 5; c < 25; ++c) art[r][c] = '.';
        for (int r = 13; r < 17; ++r)
            for (int c = 14; c < 20; ++c) art[r][c] = '#';
        auto g = from_ascii(art);
        auto members = scan_members(g);
        WallSet ws = trace_walls(g, members);
        auto frontiers = detect_frontiers(ws, RobotSpec{0.6}, g);
        CHECK(frontiers.empty());
    }
}
