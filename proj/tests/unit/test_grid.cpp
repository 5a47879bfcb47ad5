#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "gridfast/grid.hpp"
#include "gridfast/grid_io.hpp"
#include "gridfast/kernels.hpp"
#include "helpers.hpp"

using namespace gridfast;
using gridfast::test::from_ascii;

TEST_CASE("min_gap_cells follows the ceiling rule") {
    OccupancyGrid g = OccupancyGrid::filled(10, 10, CellState::free, 0.1);
    CHECK(min_gap_cells(RobotSpec{0.6}, g) == 6);
    CHECK(min_gap_cells(RobotSpec{0.5}, g) == 5);
    CHECK(min_gap_cells(RobotSpec{0.55}, g) == 6);
    CHECK_THROWS(min_gap_cells(RobotSpec{-1.0}, g));
    g.resolution = 0.0;
    CHECK_THROWS(min_gap_cells(RobotSpec{0.6}, g));
}

TEST_CASE("rotation by zero is the identity") {
    auto g = from_ascii({
        "#####",
        "#...#",
        "#.?.#",
        "#...#",
        "#####",
    });
    ScanFrame f = make_scan_frame(g, 0, 4);
    auto rg = kernels::rotate_grid(g, f);
    REQUIRE(rg.grid.rows == g.rows);
    REQUIRE(rg.grid.cols == g.cols);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) CHECK(rg.grid.at(r, c) == g.at(r, c));
}

TEST_CASE("four quarter turns restore the occupied set") {
    auto g = from_ascii({
        "........",
        "..##....",
        "..##....",
        "......#.",
        "........",
        ".#......",
    });
    OccupancyGrid cur = g;
    for (int k = 0; k < 4; ++k) {
        ScanFrame f = make_scan_frame(cur, 1, 2);  // pi/2
        cur = kernels::rotate_grid(cur, f).grid;
    }
    REQUIRE(cur.rows == g.rows);
    REQUIRE(cur.cols == g.cols);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c)
            CHECK((cur.at(r, c) == CellState::occupied) ==
                  (g.at(r, c) == CellState::occupied));
}

TEST_CASE("rotated cell lands within one cell of the analytic rotation") {
    OccupancyGrid g = OccupancyGrid::filled(31, 31, CellState::free, 0.1);
    Cell marked{8, 20};
    g.set(marked, CellState::occupied);
    ScanFrame f = make_scan_frame(g, 1, 4);  // pi/4
    auto rg = kernels::rotate_grid(g, f);

    // Independent oracle: rotate the marked point directly.
    Vec2 expect = f.to_rotated(cell_center(marked));
    bool found = false;
    for (int r = 0; r < rg.grid.rows && !found; ++r)
        for (int c = 0; c < rg.grid.cols; ++c) {
            if (rg.grid.at(r, c) != CellState::occupied) continue;
            CHECK(dist(cell_center({r, c}), expect) < 1.5);
            found = true;
            break;
        }
    CHECK(found);
}

TEST_CASE("frame transforms round-trip within half a cell") {
    OccupancyGrid g = OccupancyGrid::filled(40, 25, CellState::free, 0.1);
    for (int k = 0; k < 5; ++k) {
        ScanFrame f = make_scan_frame(g, k, 5);
        for (Cell c : {Cell{0, 0}, Cell{39, 24}, Cell{13, 7}, Cell{20, 12}}) {
            Vec2 p = cell_center(c);
            Vec2 back = f.to_original(f.to_rotated(p));
            CHECK(dist(p, back) < 0.5);
        }
    }
}

TEST_CASE("pgm loading applies thresholds and metadata") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "gridfast_io_test";
    fs::create_directories(dir);
    fs::path img = dir / "t.pgm";
    fs::path meta = dir / "t.yaml";
    {
        FILE* fp = fopen(img.string().c_str(), "wb");
        fprintf(fp, "P5\n2 2\n255\n");
        uint8_t px[4] = {254, 0, 205, 254};
        fwrite(px, 1, 4, fp);
        fclose(fp);
        FILE* fm = fopen(meta.string().c_str(), "w");
        fprintf(fm,
                "resolution: 0.1\norigin: [1.0, 2.0, 0.0]\nnegate: 0\n"
                "free_threshold: 250\noccupied_threshold: 50\n");
        fclose(fm);
    }
    OccupancyGrid g = load_map(img.string(), meta.string());
    CHECK(g.rows == 2);
    CHECK(g.cols == 2);
    CHECK(g.resolution == 0.1);
    CHECK(g.origin_x == 1.0);
    CHECK(g.at(0, 0) == CellState::free);
    CHECK(g.at(0, 1) == CellState::occupied);
    CHECK(g.at(1, 0) == CellState::unknown);
    CHECK(g.at(1, 1) == CellState::free);

    SUBCASE("non-positive resolution is rejected") {
        FILE* fm = fopen(meta.string().c_str(), "w");
        fprintf(fm, "resolution: -0.1\n");
        fclose(fm);
        CHECK_THROWS(load_map(img.string(), meta.string()));
    }
    SUBCASE("missing resolution is rejected") {
        FILE* fm = fopen(meta.string().c_str(), "w");
        fprintf(fm, "negate: 0\n");
        fclose(fm);
        CHECK_THROWS(load_map(img.string(), meta.string()));
    }
}

TEST_CASE("save/load round-trips cell states exactly") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "gridfast_io_test";
    fs::create_directories(dir);
    auto g = from_ascii({
        "##??.",
        ".....",
        "?.#.?",
    });
    g.origin_x = -3.25;
    save_map((dir / "rt.pgm").string(), (dir / "rt.yaml").string(), g);
    OccupancyGrid back =
        load_map((dir / "rt.pgm").string(), (dir / "rt.yaml").string());
    REQUIRE(back.rows == g.rows);
    REQUIRE(back.cols == g.cols);
    CHECK(back.origin_x == g.origin_x);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) CHECK(back.at(r, c) == g.at(r, c));
}

TEST_CASE("supercover line forms a 4-connected chain covering both ends") {
    uint64_t s = 99;
    for (int trial = 0; trial < 50; ++trial) {
        Vec2 a{double(test::mix64(s) % 40) + 0.5, double(test::mix64(s) % 40) + 0.5};
        Vec2 b{double(test::mix64(s) % 40) + 0.5, double(test::mix64(s) % 40) + 0.5};
        auto cells = supercover_line(a, b);
        REQUIRE(!cells.empty());
        CHECK(cells.front() == point_cell(a));
        CHECK(cells.back() == point_cell(b));
        for (size_t i = 0; i + 1 < cells.size(); ++i) {
            int dr = std::abs(cells[i].row - cells[i + 1].row);
            int dc = std::abs(cells[i].col - cells[i + 1].col);
            CHECK(dr + dc == 1);
        }
    }
}
