#include <set>

#include "doctest.h"
#include "gridfast/corpus.hpp"
#include "gridfast/gaps.hpp"
#include "helpers.hpp"

using namespace gridfast;
using gridfast::test::from_ascii;

namespace {

std::vector<Gap> one_row(const std::string& row, int g_min, int f_uk) {
    auto g = from_ascii({row});
    auto rows = segment_rows(g, g_min, f_uk, kernels::Exec::serial);
    return rows[0];
}

}  // namespace

TEST_CASE("row segmentation splits at occupied and long unknown runs") {
    SUBCASE("span threshold decides traversability") {
        auto gaps = one_row("#...#", 3, 3);
        REQUIRE(gaps.size() == 1);
        CHECK(gaps[0].start_col == 1);
        CHECK(gaps[0].end_col == 3);
        CHECK(!gaps[0].traversable);  // span 2 < 3
        auto gaps2 = one_row("#...#", 2, 3);
        CHECK(gaps2[0].traversable);
    }
    SUBCASE("short interior unknown runs are absorbed") {
        auto gaps = one_row("#..??..#", 2, 3);
        REQUIRE(gaps.size() == 1);
        CHECK(gaps[0].start_col == 1);
        CHECK(gaps[0].end_col == 6);
    }
    SUBCASE("long unknown runs split the gap") {
        auto gaps = one_row("#.????.#", 2, 3);
        REQUIRE(gaps.size() == 2);
        CHECK(gaps[0].start_col == 1);
        CHECK(gaps[0].end_col == 1);
        CHECK(gaps[1].start_col == 6);
        CHECK(gaps[1].end_col == 6);
    }
    SUBCASE("gaps never start or end on an unknown cell") {
        auto gaps = one_row("#??...??#", 2, 3);
        REQUIRE(gaps.size() == 1);
        CHECK(gaps[0].start_col == 3);
        CHECK(gaps[0].end_col == 5);
    }
}

TEST_CASE("row gaps partition the free cells") {
    uint64_t s = 7;
    for (int trial = 0; trial < 200; ++trial) {
        std::string row(30, '#');
        for (char& ch : row) {
            uint64_t v = test::mix64(s) % 3;
            ch = v == 0 ? '#' : v == 1 ? '.' : '?';
        }
        int g_min = 1 + int(test::mix64(s) % 5);
        int f_uk = int(test::mix64(s) % 4);
        auto g = from_ascii({row});
        auto gaps = segment_rows(g, g_min, f_uk, kernels::Exec::serial)[0];

        std::vector<int> owner(row.size(), -1);
        for (size_t k = 0; k < gaps.size(); ++k) {
            for (int c = gaps[k].start_col; c <= gaps[k].end_col; ++c) {
                CHECK(owner[c] == -1);
                owner[c] = int(k);
            }
            CHECK(row[gaps[k].start_col] == '.');
            CHECK(row[gaps[k].end_col] == '.');
        }
        for (size_t c = 0; c < row.size(); ++c)
            if (row[c] == '.') CHECK(owner[c] >= 0);

        // Raising g_min never creates traversable gaps.
        auto gaps2 = segment_rows(g, g_min + 1, f_uk, kernels::Exec::serial)[0];
        int t1 = 0, t2 = 0;
        for (auto& x : gaps) t1 += x.traversable;
        for (auto& x : gaps2) t2 += x.traversable;
        CHECK(t2 <= t1);
    }
}

TEST_CASE("parallel and serial segmentation agree") {
    auto maps = corpus();
    OccupancyGrid g = generate(maps[0].recipe);
    auto a = segment_rows(g, 6, 3, kernels::Exec::serial);
    auto b = segment_rows(g, 6, 3, kernels::Exec::parallel);
    REQUIRE(a.size() == b.size());
    for (size_t r = 0; r < a.size(); ++r) {
        REQUIRE(a[r].size() == b[r].size());
        for (size_t k = 0; k < a[r].size(); ++k) {
            CHECK(a[r][k].start_col == b[r][k].start_col);
            CHECK(a[r][k].end_col == b[r][k].end_col);
            CHECK(a[r][k].traversable == b[r][k].traversable);
        }
    }
}

TEST_CASE("row linking applies the overlap threshold") {
    SUBCASE("overlap of g_min columns links") {
        std::vector<Gap> a{{0, 0, 9, true, false}};
        std::vector<Gap> b{{1, 4, 13, true, false}};
        auto links = link_rows(a, b, 6, nullptr);
        REQUIRE(links[0].size() == 1);
        CHECK(links[0][0] == 0);
    }
    SUBCASE("narrow overlaps are excised from both gaps") {
        std::vector<Gap> a{{0, 0, 9, true, false}};
        std::vector<Gap> b{{1, 7, 20, true, false}};
        std::vector<Gap> frags;
        auto links = link_rows(a, b, 6, &frags);
        CHECK(links[0].empty());
        REQUIRE(frags.size() == 2);
        CHECK(frags[0].start_col == 7);
        CHECK(frags[0].end_col == 9);
        CHECK(frags[1].start_col == 7);
        CHECK(frags[1].end_col == 9);
        CHECK(!frags[0].traversable);
        CHECK(a[0].end_col == 6);   // trimmed
        CHECK(b[0].start_col == 10);
    }
    SUBCASE("a wide gap can link to two successors") {
        std::vector<Gap> a{{0, 0, 20, true, false}};
        std::vector<Gap> b{{1, 0, 7, true, false}, {1, 12, 20, true, false}};
        auto links = link_rows(a, b, 6, nullptr);
        CHECK(links[0].size() == 2);
    }
}

TEST_CASE("gap detections require two linked members") {
    // Y junction: one wide run splitting into two prongs on the next row.
    auto g = from_ascii({
        "####################",
        "#..................#",
        "#..................#",
        "#..................#",
        "#........##........#",
        "#........##........#",
        "#........##........#",
        "####################",
    });
    FrameScan fs;
    fs.frame = make_scan_frame(g, 0, 1);
    fs.rows = segment_rows(g, 4, 3, kernels::Exec::serial);
    link_frame(fs, 4);
    auto dets = find_gap_detections(fs);

    // Oracle: enumerate links by hand. Row 3 (wide) -> row 4 (two prongs).
    int forward_two = 0;
    for (const auto& d : dets)
        if (d.dir == DetDir::forward && d.members.size() == 2) ++forward_two;
    CHECK(forward_two == 1);

    // Straight corridor: no detections anywhere.
    auto c = from_ascii({
        "########",
        "#......#",
        "#......#",
        "########",
    });
    FrameScan cs;
    cs.frame = make_scan_frame(c, 0, 1);
    cs.rows = segment_rows(c, 2, 3, kernels::Exec::serial);
    link_frame(cs, 2);
    CHECK(find_gap_detections(cs).empty());
}

TEST_CASE("small-opening filter edits only the target gaps") {
    SUBCASE("slit next to walls becomes occupied") {
        auto g = from_ascii({
            "#########",
            "#...#...#",
            "#...#...#",
            "####.####",
            "#...#...#",
            "#########",
        });
        OccupancyGrid before = g;
        int changed = filter_small_openings(g, {{Cell{3, 4}}});
        CHECK(changed == 1);
        CHECK(g.at(3, 4) == CellState::occupied);
        int diffs = 0;
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c)
                if (g.at(r, c) != before.at(r, c)) ++diffs;
        CHECK(diffs == 1);
    }
    SUBCASE("isolated free run surrounded by unknown becomes unknown") {
        auto g = from_ascii({
            "???????",
            "??...??",
            "???????",
        });
        filter_small_openings(g, {{Cell{1, 2}, Cell{1, 3}, Cell{1, 4}}});
        CHECK(g.at(1, 2) == CellState::unknown);
        CHECK(g.at(1, 3) == CellState::unknown);
        CHECK(g.at(1, 4) == CellState::unknown);
    }
    SUBCASE("no gaps, no change") {
        auto g = from_ascii({"..."});
        OccupancyGrid before = g;
        CHECK(filter_small_openings(g, {}) == 0);
        for (int c = 0; c < 3; ++c) CHECK(g.at(0, c) == before.at(0, c));
    }
}

TEST_CASE("multi-direction scan on the aligned cross") {
    MapRecipe re;
    re.kind = MapKind::cross;
    re.rows = re.cols = 100;
    re.corridor_width = 10;
    OccupancyGrid g = generate(re);

    SUBCASE("two axis-aligned directions see nothing") {
        ScanConfig cfg{2, 6, 3, kernels::Exec::serial};
        auto out = scan_all_directions(g, cfg);
        CHECK(out.members.empty());
    }
    SUBCASE("four directions detect the corners") {
        ScanConfig cfg{4, 6, 3, kernels::Exec::serial};
        auto out = scan_all_directions(g, cfg);
        CHECK(!out.members.empty());
        for (const MemberGap& m : out.members) {
            CHECK(m.frame != 0);
            CHECK(m.frame != 2);  // the 90-degree frame stays blind
            CHECK(!m.cells.empty());
        }
    }
    SUBCASE("an all-free map yields no detections") {
        OccupancyGrid open = OccupancyGrid::filled(40, 40, CellState::free, 0.1);
        ScanConfig cfg{4, 6, 3, kernels::Exec::serial};
        auto out = scan_all_directions(open, cfg);
        CHECK(out.members.empty());
    }
}

TEST_CASE("the segment-filter pass is stable after one application") {
    MapRecipe re;
    re.kind = MapKind::maze;
    re.rows = re.cols = 150;
    re.corridor_width = 9;
    re.seed = 5;
    re.noise = 0.15;
    OccupancyGrid g = generate(re);

    ScanConfig cfg{4, 6, 3, kernels::Exec::serial};
    auto out1 = scan_all_directions(g, cfg);
    auto out2 = scan_all_directions(out1.filtered, cfg);
    CHECK(out2.filtered_cells == 0);
    for (size_t i = 0; i < out1.filtered.cells.size(); ++i)
        CHECK(out1.filtered.cells[i] == out2.filtered.cells[i]);
}
