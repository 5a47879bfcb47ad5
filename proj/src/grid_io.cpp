#include "gridfast/grid_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridfast {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Next PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(char(ch));
    }
    return tok;
}

}  // namespace

MapMeta read_map_meta(const std::string& meta_path) {
    std::ifstream in(meta_path);
    if (!in) throw std::runtime_error("cannot open map metadata: " + meta_path);
    MapMeta meta;
    bool have_resolution = false;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "image") {
            meta.image = val;
        } else if (key == "resolution") {
            meta.resolution = std::stod(val);
            have_resolution = true;
        } else if (key == "origin") {
            std::string v = val;
            for (char& ch : v)
                if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
            std::istringstream ss(v);
            if (!(ss >> meta.origin_x >> meta.origin_y))
                throw std::runtime_error("malformed origin in " + meta_path);
            ss >> meta.origin_yaw;
        } else if (key == "negate") {
            meta.negate = std::stoi(val);
        } else if (key == "free_threshold") {
            meta.free_threshold = std::stoi(val);
        } else if (key == "occupied_threshold") {
            meta.occupied_threshold = std::stoi(val);
        }
    }
    if (!have_resolution)
        throw std::runtime_error("metadata missing 'resolution': " + meta_path);
    if (meta.resolution <= 0.0)
        throw std::invalid_argument("resolution must be positive: " + meta_path);
    return meta;
}

void write_map_meta(const std::string& meta_path, const MapMeta& meta) {
    std::ofstream out(meta_path);
    if (!out) throw std::runtime_error("cannot write map metadata: " + meta_path);
    out << "image: " << meta.image << "\n";
    out << "resolution: " << meta.resolution << "\n";
    out << "origin: [" << meta.origin_x << ", " << meta.origin_y << ", "
        << meta.origin_yaw << "]\n";
    out << "negate: " << meta.negate << "\n";
    out << "free_threshold: " << meta.free_threshold << "\n";
    out << "occupied_threshold: " << meta.occupied_threshold << "\n";
}

OccupancyGrid load_map(const std::string& image_path,
                       const std::string& meta_path) {
    MapMeta meta = read_map_meta(meta_path);

    std::ifstream in(image_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open map image: " + image_path);

    std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("unsupported PGM magic '" + magic + "' in " +
                                 image_path);
    int cols = 0, rows = 0, maxval = 0;
    try {
        cols = std::stoi(next_token(in));
        rows = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("malformed PGM header in " + image_path);
    }
    if (cols < 1 || rows < 1 || maxval < 1 || maxval > 255)
        throw std::runtime_error("malformed PGM header in " + image_path);

    std::vector<uint8_t> pixels(size_t(rows) * cols);
    if (magic == "P5") {
        in.read(reinterpret_cast<char*>(pixels.data()),
                std::streamsize(pixels.size()));
        if (size_t(in.gcount()) != pixels.size())
            throw std::runtime_error("truncated PGM data in " + image_path);
    } else {
        for (auto& p : pixels) {
            std::string tok = next_token(in);
            if (tok.empty())
                throw std::runtime_error("truncated PGM data in " + image_path);
            p = uint8_t(std::stoi(tok));
        }
    }

    OccupancyGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.resolution = meta.resolution;
    grid.origin_x = meta.origin_x;
    grid.origin_y = meta.origin_y;
    grid.origin_yaw = meta.origin_yaw;
    grid.cells.resize(pixels.size());
    for (size_t i = 0; i < pixels.size(); ++i) {
        int v = meta.negate ? 255 - pixels[i] : pixels[i];
        if (v >= meta.free_threshold)
            grid.cells[i] = CellState::free;
        else if (v <= meta.occupied_threshold)
            grid.cells[i] = CellState::occupied;
        else
            grid.cells[i] = CellState::unknown;
    }
    return grid;
}

void save_map(const std::string& image_path, const std::string& meta_path,
              const OccupancyGrid& grid) {
    std::ofstream out(image_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write map image: " + image_path);
    out << "P5\n" << grid.cols << " " << grid.rows << "\n255\n";
    std::vector<uint8_t> pixels(grid.cells.size());
    for (size_t i = 0; i < grid.cells.size(); ++i) {
        switch (grid.cells[i]) {
            case CellState::free: pixels[i] = 254; break;
            case CellState::occupied: pixels[i] = 0; break;
            default: pixels[i] = 205; break;
        }
    }
    out.write(reinterpret_cast<const char*>(pixels.data()),
              std::streamsize(pixels.size()));

    MapMeta meta;
    size_t slash = image_path.find_last_of('/');
    meta.image = slash == std::string::npos ? image_path
                                            : image_path.substr(slash + 1);
    meta.resolution = grid.resolution;
    meta.origin_x = grid.origin_x;
    meta.origin_y = grid.origin_y;
    meta.origin_yaw = grid.origin_yaw;
    write_map_meta(meta_path, meta);
}

}  // namespace gridfast
