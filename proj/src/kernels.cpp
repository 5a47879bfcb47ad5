#include "gridfast/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gridfast::kernels {

RotatedGrid rotate_grid(const OccupancyGrid& grid, const ScanFrame& frame,
                        Exec exec) {
    RotatedGrid out;
    out.frame = frame;
    out.grid = OccupancyGrid::filled(frame.out_rows, frame.out_cols,
                                     CellState::unknown, grid.resolution);
    out.grid.origin_x = grid.origin_x;
    out.grid.origin_y = grid.origin_y;
    out.grid.origin_yaw = grid.origin_yaw;
    out.interior.assign(size_t(frame.out_rows) * frame.out_cols, 0);

    const int orows = frame.out_rows, ocols = frame.out_cols;
    auto body = [&](int r) {
        for (int c = 0; c < ocols; ++c) {
            Vec2 src = frame.to_original({c + 0.5, r + 0.5});
            Cell sc = point_cell(src);
            if (!grid.in_bounds(sc)) continue;
            size_t idx = size_t(r) * ocols + c;
            out.grid.cells[idx] = grid.at(sc);
            out.interior[idx] = 1;
        }
    };
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int r = 0; r < orows; ++r) body(r);
    } else {
        for (int r = 0; r < orows; ++r) body(r);
    }
    return out;
}

namespace {

// Deletability test of the two-subcycle thinning scheme. Neighbors are
// p2..p9 clockwise from north.
inline bool deletable(const uint8_t* m, int rows, int cols, int r, int c,
                      int pass) {
    auto at = [&](int rr, int cc) -> int {
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) return 0;
        return m[size_t(rr) * cols + cc] ? 1 : 0;
    };
    int p2 = at(r - 1, c), p3 = at(r - 1, c + 1), p4 = at(r, c + 1),
        p5 = at(r + 1, c + 1), p6 = at(r + 1, c), p7 = at(r + 1, c - 1),
        p8 = at(r, c - 1), p9 = at(r - 1, c - 1);
    int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
    if (b < 2 || b > 6) return false;
    int a = 0;
    int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
    for (int i = 0; i < 8; ++i)
        if (seq[i] == 0 && seq[i + 1] == 1) ++a;
    if (a != 1) return false;
    if (pass == 0) {
        if (p2 * p4 * p6 != 0) return false;
        if (p4 * p6 * p8 != 0) return false;
    } else {
        if (p2 * p4 * p8 != 0) return false;
        if (p2 * p6 * p8 != 0) return false;
    }
    return true;
}

}  // namespace

int thin_pass(std::vector<uint8_t>& mask, int rows, int cols, int pass,
              const std::vector<uint8_t>& locked, Exec exec) {
    std::vector<uint8_t> remove(mask.size(), 0);
    const uint8_t* m = mask.data();
    int total = 0;

    auto body = [&](int r) {
        int count = 0;
        for (int c = 0; c < cols; ++c) {
            size_t idx = size_t(r) * cols + c;
            if (!m[idx] || (idx < locked.size() && locked[idx])) continue;
            if (deletable(m, rows, cols, r, c, pass)) {
                remove[idx] = 1;
                ++count;
            }
        }
        return count;
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : total)
#endif
        for (int r = 0; r < rows; ++r) total += body(r);
    } else {
        for (int r = 0; r < rows; ++r) total += body(r);
    }

    if (total)
        for (size_t i = 0; i < mask.size(); ++i)
            if (remove[i]) mask[i] = 0;
    return total;
}

void thin_mask(std::vector<uint8_t>& mask, int rows, int cols,
               const std::vector<uint8_t>& locked, Exec exec) {
    while (true) {
        int n0 = thin_pass(mask, rows, cols, 0, locked, exec);
        int n1 = thin_pass(mask, rows, cols, 1, locked, exec);
        if (n0 + n1 == 0) break;
    }
}

}  // namespace gridfast::kernels
