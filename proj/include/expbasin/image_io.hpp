#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace expbasin {

// 8-bit grayscale writers. Both emit byte-identical files for identical
// inputs; the PNG encoder uses stored deflate blocks for that reason.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& gray);
void write_png_gray(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& gray);

}  // namespace expbasin
