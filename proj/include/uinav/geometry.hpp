// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace uinav {

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

// Screen-pixel rectangle, half-open on the right and bottom edges:
// a point (x, y) is inside iff left <= x < right and top <= y < bottom.
struct Rect {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  bool well_formed() const { return left <= right && top <= bottom; }
  int width() const { return right - left; }
  int height() const { return bottom - top; }
  long long area() const {
    return static_cast<long long>(width()) * height();
  }

  bool contains(int x, int y) const {
    return x >= left && x < right && y >= top && y < bottom;
  }
  bool contains(const Point& p) const { return contains(p.x, p.y); }

  Point center() const {
    // Coordinates are nonnegative, so integer division is floor.
    return Point{(left + right) / 2, (top + bottom) / 2};
  }

  bool operator==(const Rect&) const = default;
};

}  // namespace uinav
