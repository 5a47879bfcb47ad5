#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace gridfast {

// Grid cell address, (row, col).
struct Cell {
    int row = 0;
    int col = 0;

    bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
    bool operator!=(const Cell& o) const { return !(*this == o); }
    bool operator<(const Cell& o) const {
        return row != o.row ? row < o.row : col < o.col;
    }
};

struct CellHash {
    size_t operator()(const Cell& c) const {
        return std::hash<int64_t>()((int64_t(c.row) << 32) ^ uint32_t(c.col));
    }
};

// Continuous point in cell coordinates: x along columns, y along rows.
// A cell (r, c) has its center at (c + 0.5, r + 0.5).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 cell_center(const Cell& c) { return {c.col + 0.5, c.row + 0.5}; }

inline Cell point_cell(const Vec2& p) {
    return {int(std::floor(p.y)), int(std::floor(p.x))};
}

inline double dist(const Vec2& a, const Vec2& b) { return (b - a).norm(); }

inline double cell_dist(const Cell& a, const Cell& b) {
    double dr = a.row - b.row, dc = a.col - b.col;
    return std::sqrt(dr * dr + dc * dc);
}

inline int chebyshev(const Cell& a, const Cell& b) {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

// All cells touched by the segment a-b, as a 4-connected chain. Used both
// for rasterizing opening strips (a 4-connected chain is a tight barrier
// for 4-connected flood fills) and for ray obstruction checks.
std::vector<Cell> supercover_line(Vec2 a, Vec2 b);

// Proper or touching intersection of segments [a1,b1] and [a2,b2].
bool segments_intersect(const Vec2& a1, const Vec2& b1, const Vec2& a2,
                        const Vec2& b2);

// Shoelace area of a closed cell loop (cell centers as vertices).
double loop_signed_area(const std::vector<Cell>& loop);

}  // namespace gridfast
