#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cardsep {

/// Axis-aligned pixel rectangle, top-left origin.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }    // one past the last column
  int bottom() const { return y + h; }   // one past the last row
  long long area() const { return static_cast<long long>(w) * h; }

  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }

  bool operator==(const Rect&) const = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Rect{};
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("GrayImage: dimensions must be >= 1");
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
      throw std::invalid_argument("GrayImage: pixel count does not match dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(width_) * height_;
  }
  bool empty() const { return pixels_.empty(); }

  Rect bounds() const { return Rect{0, 0, width_, height_}; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  std::uint8_t at(int x, int y) const {
    assert(in_bounds(x, y));
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, std::uint8_t v) {
    assert(in_bounds(x, y));
    pixels_[static_cast<std::size_t>(y) * width_ + x] = v;
  }

  const std::uint8_t* row(int y) const {
    assert(y >= 0 && y < height_);
    return pixels_.data() + static_cast<std::size_t>(y) * width_;
  }
  std::uint8_t* row(int y) {
    assert(y >= 0 && y < height_);
    return pixels_.data() + static_cast<std::size_t>(y) * width_;
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  /// Copy of the sub-image; rect must lie fully inside.
  GrayImage crop(const Rect& r) const {
    if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 || r.right() > width_ ||
        r.bottom() > height_)
      throw std::invalid_argument("GrayImage::crop: rect outside image");
    GrayImage out(r.w, r.h);
    for (int y = 0; y < r.h; ++y) {
      const std::uint8_t* src = row(r.y + y) + r.x;
      std::copy(src, src + r.w, out.row(y));
    }
    return out;
  }

  std::pair<std::uint8_t, std::uint8_t> min_max() const {
    auto [lo, hi] = std::minmax_element(pixels_.begin(), pixels_.end());
    return {*lo, *hi};
  }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace cardsep
