#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nsrag {

/// RGBA8 raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 4
};

Image decode_png(const std::string& bytes);
std::string encode_png(const Image& image);

Image read_png_file(const std::string& path);
void write_png_file(const std::string& path, const Image& image);

/// Crop [x0, y0, w, h] clamped to the image bounds; throws degenerate-box
/// when nothing remains after clamping.
Image crop(const Image& image, int x0, int y0, int w, int h);

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

}  // namespace nsrag
