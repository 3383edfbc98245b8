// SPDX-License-Identifier: Apache-2.0
#include "uinav/raster.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstring>
#include <string>

#include "uinav/errors.hpp"

namespace uinav {

Image::Image(int w, int h, uint32_t fill) : width(w), height(h) {
  rgba.resize(size_t(w) * h * 4);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) set_pixel(x, y, fill);
}

void Image::set_pixel(int x, int y, uint32_t color_rgba) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  unsigned char* p = pixel(x, y);
  p[0] = (color_rgba >> 24) & 0xff;
  p[1] = (color_rgba >> 16) & 0xff;
  p[2] = (color_rgba >> 8) & 0xff;
  p[3] = color_rgba & 0xff;
}

namespace {

struct PngReadState {
  const unsigned char* data;
  size_t size;
  size_t offset;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->offset + count > state->size)
    png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, state->data + state->offset, count);
  state->offset += count;
}

void png_write_fn(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void png_flush_fn(png_structp) {}

}  // namespace

Image decode_png(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw DecodeError("not a PNG stream");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DecodeError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DecodeError("png_create_info_struct failed");
  }

  Image image;
  std::vector<png_bytep> rows;
  PngReadState state{bytes.data(), bytes.size(), 0};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError("malformed PNG stream");
  }

  png_set_read_fn(png, &state, png_read_fn);
  png_read_info(png, info);

  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);

  // Normalize every variant to 8-bit RGBA.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_filler(png, 0xff, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  image.rgba.resize(size_t(width) * height * 4);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y)
    rows[y] = image.rgba.data() + size_t(y) * width * 4;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

std::vector<unsigned char> encode_png(const Image& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<unsigned char> out;
  std::vector<png_const_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y)
    rows[y] = image.rgba.data() + size_t(y) * image.width * 4;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed");
  }

  png_set_write_fn(png, &out, png_write_fn, png_flush_fn);
  png_set_IHDR(png, info, image.width, image.height, 8,
               PNG_COLOR_TYPE_RGB_ALPHA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_rows(png, const_cast<png_bytepp>(rows.data()),
                 static_cast<png_uint_32>(rows.size()));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  return out;
}

void fill_rect(Image& image, int left, int top, int right, int bottom,
               uint32_t color_rgba) {
  left = std::max(left, 0);
  top = std::max(top, 0);
  right = std::min(right, image.width);
  bottom = std::min(bottom, image.height);
  for (int y = top; y < bottom; ++y)
    for (int x = left; x < right; ++x) image.set_pixel(x, y, color_rgba);
}

void fill_circle(Image& image, int cx, int cy, int radius,
                 uint32_t color_rgba) {
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius)
        image.set_pixel(cx + dx, cy + dy, color_rgba);
}

namespace {

// 5x7 digit glyphs, one row per byte, low 5 bits used.
constexpr unsigned char kDigitFont[10][7] = {
    {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e},  // 0
    {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e},  // 1
    {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f},  // 2
    {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e},  // 3
    {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02},  // 4
    {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e},  // 5
    {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e},  // 6
    {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e},  // 8
    {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c},  // 9
};

constexpr int kGlyphScale = 2;
constexpr int kGlyphWidth = 5 * kGlyphScale;
constexpr int kGlyphHeight = 7 * kGlyphScale;
constexpr int kGlyphGap = 2;

void draw_digit(Image& image, int left, int top, int digit,
                uint32_t color_rgba) {
  for (int row = 0; row < 7; ++row) {
    unsigned char bits = kDigitFont[digit][row];
    for (int col = 0; col < 5; ++col) {
      if (!(bits & (1u << (4 - col)))) continue;
      for (int sy = 0; sy < kGlyphScale; ++sy)
        for (int sx = 0; sx < kGlyphScale; ++sx)
          image.set_pixel(left + col * kGlyphScale + sx,
                          top + row * kGlyphScale + sy, color_rgba);
    }
  }
}

}  // namespace

void draw_number(Image& image, int cx, int cy, int value,
                 uint32_t color_rgba) {
  std::string digits = std::to_string(std::max(value, 0));
  int total_width = static_cast<int>(digits.size()) * kGlyphWidth +
                    (static_cast<int>(digits.size()) - 1) * kGlyphGap;
  int left = cx - total_width / 2;
  int top = cy - kGlyphHeight / 2;
  for (char c : digits) {
    draw_digit(image, left, top, c - '0', color_rgba);
    left += kGlyphWidth + kGlyphGap;
  }
}

}  // namespace uinav
