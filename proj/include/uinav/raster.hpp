// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uinav {

// 8-bit RGBA raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgba;  // width * height * 4

  Image() = default;
  Image(int w, int h, uint32_t fill = 0xffffffffu);

  unsigned char* pixel(int x, int y) { return &rgba[(size_t(y) * width + x) * 4]; }
  const unsigned char* pixel(int x, int y) const {
    return &rgba[(size_t(y) * width + x) * 4];
  }
  void set_pixel(int x, int y, uint32_t color_rgba);

  bool operator==(const Image&) const = default;
};

// Throws DecodeError on malformed input.
Image decode_png(std::span<const unsigned char> bytes);
std::vector<unsigned char> encode_png(const Image& image);

void fill_rect(Image& image, int left, int top, int right, int bottom,
               uint32_t color_rgba);
void fill_circle(Image& image, int cx, int cy, int radius,
                 uint32_t color_rgba);
// Numeral digits from a fixed 5x7 bitmap font scaled 2x, centered at (cx, cy).
void draw_number(Image& image, int cx, int cy, int value, uint32_t color_rgba);

}  // namespace uinav
