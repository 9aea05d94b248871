#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardsep/image.hpp"
#include "cardsep/imageio.hpp"

namespace cardsep {

struct BackgroundConfig {
  int t_fixed = 20;
  int t_min = 100;
  int block_size = 8;

  void validate() const {
    if (t_fixed < 0) throw std::invalid_argument("BackgroundConfig: t_fixed < 0");
    if (t_min < 0 || t_min > 255)
      throw std::invalid_argument("BackgroundConfig: t_min outside [0, 255]");
    if (block_size < 2)
      throw std::invalid_argument("BackgroundConfig: block_size < 2");
  }
};

enum class BlockLabel : std::uint8_t { Background, Foreground };

/// Per-block labels, row-major over block coordinates.
struct BlockGrid {
  int cols = 0;
  int rows = 0;
  int block_size = 8;
  int image_w = 0;
  int image_h = 0;
  std::vector<BlockLabel> labels;

  BlockLabel at(int bx, int by) const {
    return labels[static_cast<std::size_t>(by) * cols + bx];
  }
  bool is_foreground(int bx, int by) const {
    return at(bx, by) == BlockLabel::Foreground;
  }
  bool in_bounds(int bx, int by) const {
    return bx >= 0 && bx < cols && by >= 0 && by < rows;
  }

  /// Pixel rect of a block, clipped to the source image (edge blocks shrink).
  Rect block_rect(int bx, int by) const {
    const int x = bx * block_size;
    const int y = by * block_size;
    return Rect{x, y, std::min(block_size, image_w - x),
                std::min(block_size, image_h - y)};
  }
};

/// T0 for a block whose minimum exceeds t_min; grows with brighter minima.
inline int compute_block_threshold(int g_min, const BackgroundConfig& cfg) {
  if (g_min <= cfg.t_min)
    throw std::invalid_argument("compute_block_threshold: g_min <= t_min");
  return cfg.t_fixed + 2 * std::max(0, (g_min - cfg.t_min) - cfg.t_fixed);
}

inline BlockLabel classify_block(int g_min, int g_max,
                                 const BackgroundConfig& cfg) {
  if (g_min > g_max)
    throw std::invalid_argument("classify_block: g_min > g_max");
  if (g_min <= cfg.t_min) return BlockLabel::Foreground;
  const int t0 = compute_block_threshold(g_min, cfg);
  return (g_max - g_min) < t0 ? BlockLabel::Background : BlockLabel::Foreground;
}

inline BlockGrid eliminate_background(const GrayImage& image,
                                      const BackgroundConfig& cfg) {
  cfg.validate();
  const int bs = cfg.block_size;
  BlockGrid grid;
  grid.block_size = bs;
  grid.image_w = image.width();
  grid.image_h = image.height();
  grid.cols = (image.width() + bs - 1) / bs;
  grid.rows = (image.height() + bs - 1) / bs;
  grid.labels.resize(static_cast<std::size_t>(grid.cols) * grid.rows);

  for (int by = 0; by < grid.rows; ++by) {
    const int y0 = by * bs;
    const int y1 = std::min(y0 + bs, image.height());
    for (int bx = 0; bx < grid.cols; ++bx) {
      const int x0 = bx * bs;
      const int x1 = std::min(x0 + bs, image.width());
      int g_min = 255, g_max = 0;
      for (int y = y0; y < y1; ++y) {
        const std::uint8_t* row = image.row(y);
        for (int x = x0; x < x1; ++x) {
          const int v = row[x];
          g_min = std::min(g_min, v);
          g_max = std::max(g_max, v);
        }
      }
      grid.labels[static_cast<std::size_t>(by) * grid.cols + bx] =
          classify_block(g_min, g_max, cfg);
    }
  }
  return grid;
}

/// Debug rendering: one pixel per block, background=255, foreground=128.
inline void save_block_debug(const BlockGrid& grid, const std::string& path) {
  GrayImage img(grid.cols, grid.rows);
  for (int by = 0; by < grid.rows; ++by)
    for (int bx = 0; bx < grid.cols; ++bx)
      img.set(bx, by, grid.is_foreground(bx, by) ? 128 : 255);
  save_pgm(img, path);
}

}  // namespace cardsep
