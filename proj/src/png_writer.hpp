#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridfast {

// Minimal RGB8 PNG writer (stored deflate blocks, no compression deps).
void write_png_rgb(const std::string& path, const std::vector<uint8_t>& rgb,
                   int width, int height);

}  // namespace gridfast
