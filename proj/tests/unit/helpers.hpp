#pragma once

#include <string>
#include <vector>

#include "gridfast/grid.hpp"

namespace gridfast::test {

// '#' occupied, '.' free, '?' unknown.
inline OccupancyGrid from_ascii(const std::vector<std::string>& rows,
                                double res = 0.1) {
    OccupancyGrid g = OccupancyGrid::filled(int(rows.size()),
                                            int(rows[0].size()),
                                            CellState::unknown, res);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) {
            char ch = rows[r][c];
            g.set(r, c, ch == '#'   ? CellState::occupied
                        : ch == '.' ? CellState::free
                                    : CellState::unknown);
        }
    return g;
}

inline uint64_t mix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

}  // namespace gridfast::test
