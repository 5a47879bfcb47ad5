#include "gridfast/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gridfast {

namespace {

uint64_t splitmix(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

double cell_noise(uint64_t seed, int r, int c) {
    uint64_t s = seed ^ (uint64_t(uint32_t(r)) << 32) ^ uint32_t(c);
    return double(splitmix(s) >> 11) * 0x1.0p-53;
}

void carve(OccupancyGrid& g, int r0, int r1, int c0, int c1) {
    for (int r = std::max(0, r0); r < std::min(g.rows, r1); ++r)
        for (int c = std::max(0, c0); c < std::min(g.cols, c1); ++c)
            g.set(r, c, CellState::free);
}

// Occupied dents on boundary free cells, never on frontier rows/cols.
void apply_boundary_noise(OccupancyGrid& g, uint64_t seed, double noise) {
    if (noise <= 0.0) return;
    const OccupancyGrid snapshot = g;
    for (int r = 1; r + 1 < g.rows; ++r)
        for (int c = 1; c + 1 < g.cols; ++c) {
            Cell cc{r, c};
            if (snapshot.at(cc) != CellState::free) continue;
            if (!has_neighbor8(snapshot, cc, CellState::occupied)) continue;
            if (cell_noise(seed, r, c) < noise) g.set(cc, CellState::occupied);
        }
}

OccupancyGrid make_cross(const MapRecipe& re, bool with_vertical,
                         int stem_end_row) {
    OccupancyGrid g = OccupancyGrid::filled(re.rows, re.cols,
                                            CellState::occupied, re.resolution);
    int w = re.corridor_width;
    int r0 = re.rows / 2 - w / 2;
    int c0 = re.cols / 2 - w / 2;
    carve(g, r0, r0 + w, 0, re.cols);
    if (with_vertical) carve(g, r0, stem_end_row, c0, c0 + w);
    apply_boundary_noise(g, re.seed, re.noise);
    return g;
}

OccupancyGrid make_full_cross(const MapRecipe& re) {
    OccupancyGrid g = OccupancyGrid::filled(re.rows, re.cols,
                                            CellState::occupied, re.resolution);
    int w = re.corridor_width;
    int r0 = re.rows / 2 - w / 2;
    int c0 = re.cols / 2 - w / 2;
    carve(g, r0, r0 + w, 0, re.cols);
    carve(g, 0, re.rows, c0, c0 + w);
    apply_boundary_noise(g, re.seed, re.noise);
    return g;
}

OccupancyGrid make_ring(const MapRecipe& re) {
    OccupancyGrid g = OccupancyGrid::filled(re.rows, re.cols,
                                            CellState::occupied, re.resolution);
    int w = re.corridor_width;
    int m = std::max(6, re.rows / 8);
    carve(g, m, re.rows - m, m, re.cols - m);
    // Inner block.
    for (int r = m + w; r < re.rows - m - w; ++r)
        for (int c = m + w; c < re.cols - m - w; ++c)
            g.set(r, c, CellState::occupied);
    // Entry arm from the top edge into the ring.
    int c0 = re.cols / 2 - w / 2;
    carve(g, 0, m + w, c0, c0 + w);
    apply_boundary_noise(g, re.seed, re.noise);
    return g;
}

OccupancyGrid make_maze(const MapRecipe& re) {
    const int w = re.corridor_width;
    const int t = 5;  // wall thickness
    const int pitch = w + t;
    int nx = (re.cols - t) / pitch;
    int ny = (re.rows - t) / pitch;
    if (nx < 2 || ny < 2) throw std::invalid_argument("maze too small");
    OccupancyGrid g = OccupancyGrid::filled(re.rows, re.cols,
                                            CellState::occupied, re.resolution);

    auto cell_rect = [&](int iy, int ix) {
        int r0 = t + iy * pitch, c0 = t + ix * pitch;
        carve(g, r0, r0 + w, c0, c0 + w);
    };
    auto passage = [&](int iy, int ix, int jy, int jx) {
        int r0 = t + std::min(iy, jy) * pitch;
        int c0 = t + std::min(ix, jx) * pitch;
        if (iy == jy)
            carve(g, r0, r0 + w, c0, c0 + pitch + w);
        else
            carve(g, r0, r0 + pitch + w, c0, c0 + w);
    };

    // Depth-first carving with an explicit stack.
    std::vector<uint8_t> visited(size_t(nx) * ny, 0);
    std::vector<std::pair<int, int>> stack;
    uint64_t rng = re.seed * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull;
    stack.push_back({0, 0});
    visited[0] = 1;
    cell_rect(0, 0);
    while (!stack.empty()) {
        auto [iy, ix] = stack.back();
        int dirs[4] = {0, 1, 2, 3};
        for (int i = 3; i > 0; --i)
            std::swap(dirs[i], dirs[splitmix(rng) % (i + 1)]);
        static const int dd[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        bool moved = false;
        for (int d : dirs) {
            int jy = iy + dd[d][0], jx = ix + dd[d][1];
            if (jy < 0 || jy >= ny || jx < 0 || jx >= nx) continue;
            if (visited[size_t(jy) * nx + jx]) continue;
            visited[size_t(jy) * nx + jx] = 1;
            cell_rect(jy, jx);
            passage(iy, ix, jy, jx);
            stack.push_back({jy, jx});
            moved = true;
            break;
        }
        if (!moved) stack.pop_back();
    }
    apply_boundary_noise(g, re.seed, re.noise);
    return g;
}

OccupancyGrid make_cluttered(const MapRecipe& re) {
    OccupancyGrid g = OccupancyGrid::filled(re.rows, re.cols,
                                            CellState::occupied, re.resolution);
    carve(g, 3, re.rows - 3, 3, re.cols - 3);
    // Obstacles on a coarse lattice, jittered, so filtering never merges.
    const int pitch = 18, blob = 3;
    uint64_t rng = re.seed * 0x9e3779b97f4a7c15ull + 17;
    for (int br = 12; br + pitch < re.rows - 12; br += pitch)
        for (int bc = 12; bc + pitch < re.cols - 12; bc += pitch) {
            if (splitmix(rng) % 100 >= 55) continue;
            int jr = int(splitmix(rng) % 5) - 2;
            int jc = int(splitmix(rng) % 5) - 2;
            for (int r = 0; r < blob; ++r)
                for (int c = 0; c < blob; ++c)
                    g.set(br + jr + r, bc + jc + c, CellState::occupied);
        }
    apply_boundary_noise(g, re.seed, re.noise);
    return g;
}

}  // namespace

MapKind map_kind_from_name(const std::string& name) {
    if (name == "cross") return MapKind::cross;
    if (name == "tJunction") return MapKind::t_junction;
    if (name == "corridor") return MapKind::corridor;
    if (name == "deadEndStub") return MapKind::dead_end_stub;
    if (name == "ring") return MapKind::ring;
    if (name == "maze") return MapKind::maze;
    if (name == "clutteredOpen") return MapKind::cluttered_open;
    throw std::invalid_argument("unknown map kind: " + name);
}

std::string map_kind_name(MapKind kind) {
    switch (kind) {
        case MapKind::cross: return "cross";
        case MapKind::t_junction: return "tJunction";
        case MapKind::corridor: return "corridor";
        case MapKind::dead_end_stub: return "deadEndStub";
        case MapKind::ring: return "ring";
        case MapKind::maze: return "maze";
        default: return "clutteredOpen";
    }
}

OccupancyGrid generate(const MapRecipe& re) {
    if (re.rows < 20 || re.cols < 20)
        throw std::invalid_argument("map dimensions too small");
    if (re.corridor_width < 2)
        throw std::invalid_argument("corridor width too small");
    switch (re.kind) {
        case MapKind::cross: return make_full_cross(re);
        case MapKind::t_junction:
            return make_cross(re, true, INT32_MAX);
        case MapKind::corridor: return make_cross(re, false, 0);
        case MapKind::dead_end_stub: {
            MapRecipe r2 = re;
            return make_cross(r2, true, re.rows - std::max(6, re.rows / 5));
        }
        case MapKind::ring: return make_ring(re);
        case MapKind::maze: return make_maze(re);
        default: return make_cluttered(re);
    }
}

std::vector<CorpusMap> corpus() {
    std::vector<CorpusMap> maps;
    auto add = [&](const std::string& name, MapRecipe re, GroundTruth t) {
        maps.push_back(CorpusMap{name, re, t});
    };
    MapRecipe re;

    re = {};
    re.kind = MapKind::cross;
    re.rows = re.cols = 100;
    re.corridor_width = 10;
    add("cross100", re, {true, 1, 4, 0, 0, 4});

    re = {};
    re.kind = MapKind::cross;
    re.rows = re.cols = 160;
    re.corridor_width = 12;
    add("cross160", re, {true, 1, 4, 0, 0, 4});

    re = {};
    re.kind = MapKind::t_junction;
    re.rows = re.cols = 120;
    re.corridor_width = 10;
    add("tee120", re, {true, 1, 3, 0, 0, 3});

    re = {};
    re.kind = MapKind::corridor;
    re.rows = re.cols = 90;
    re.corridor_width = 10;
    add("corridor90", re, {true, 0, 0, 0, 0, 0});

    re = {};
    re.kind = MapKind::dead_end_stub;
    re.rows = re.cols = 120;
    re.corridor_width = 10;
    add("stub120", re, {true, 1, 3, 0, 1, 2});

    re = {};
    re.kind = MapKind::ring;
    re.rows = re.cols = 140;
    re.corridor_width = 10;
    add("ring140", re, {true, 1, 3, 1, 0, 1});

    re = {};
    re.kind = MapKind::maze;
    re.rows = re.cols = 220;
    re.corridor_width = 9;
    re.seed = 3;
    add("maze220a", re, {});

    re.seed = 11;
    add("maze220b", re, {});

    re = {};
    re.kind = MapKind::maze;
    re.rows = re.cols = 300;
    re.corridor_width = 9;
    re.seed = 7;
    add("maze300", re, {});

    re = {};
    re.kind = MapKind::cluttered_open;
    re.rows = re.cols = 150;
    re.seed = 5;
    add("cluttered150", re, {});

    re = {};
    re.kind = MapKind::cluttered_open;
    re.rows = re.cols = 200;
    re.seed = 9;
    add("cluttered200", re, {});

    re = {};
    re.kind = MapKind::maze;
    re.rows = re.cols = 520;
    re.corridor_width = 9;
    re.seed = 21;
    re.noise = 0.12;
    add("maze520n", re, {});

    re.rows = re.cols = 560;
    re.seed = 22;
    add("maze560n", re, {});

    re.rows = re.cols = 600;
    re.seed = 23;
    add("maze600n", re, {});

    return maps;
}

MapRecipe parse_recipe(const std::string& text) {
    MapRecipe re;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string()
                                          : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "kind")
            re.kind = map_kind_from_name(val);
        else if (key == "rows")
            re.rows = std::stoi(val);
        else if (key == "cols")
            re.cols = std::stoi(val);
        else if (key == "width")
            re.corridor_width = std::stoi(val);
        else if (key == "seed")
            re.seed = std::stoull(val);
        else if (key == "noise")
            re.noise = std::stod(val);
        else if (key == "resolution")
            re.resolution = std::stod(val);
    }
    return re;
}

}  // namespace gridfast
