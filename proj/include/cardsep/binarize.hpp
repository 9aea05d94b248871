#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cardsep/image.hpp"
#include "cardsep/imageio.hpp"

namespace cardsep {

struct BinaryRegion {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, 1 = ink

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  long long foreground_count() const {
    long long n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
  }
};

/// Two phases: strict mid-intensity threshold, then one raster pass that
/// promotes background pixels with 5 or more foreground neighbors. Earlier
/// promotions count for later pixels.
inline BinaryRegion binarize_region(const GrayImage& crop) {
  const int w = crop.width(), h = crop.height();
  BinaryRegion out;
  out.width = w;
  out.height = h;
  out.bits.assign(static_cast<std::size_t>(w) * h, 0);

  const auto [min_i, max_i] = crop.min_max();
  const int threshold = (min_i + max_i) / 2;
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = crop.row(y);
    for (int x = 0; x < w; ++x)
      if (row[x] < threshold) out.set(x, y, true);
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (out.at(x, y)) continue;
      int fg = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          if (out.at(nx, ny)) ++fg;
        }
      }
      if (fg >= 5) out.set(x, y, true);
    }
  }
  return out;
}

inline GrayImage binary_to_image(const BinaryRegion& b) {
  GrayImage img(b.width, b.height, 255);
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x)
      if (b.at(x, y)) img.set(x, y, 0);
  return img;
}

/// Foreground renders as 0, background as 255.
inline void save_binary_pgm(const BinaryRegion& b, const std::string& path) {
  save_pgm(binary_to_image(b), path);
}

}  // namespace cardsep
