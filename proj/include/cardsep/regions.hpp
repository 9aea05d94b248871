#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cardsep/background.hpp"
#include "cardsep/image.hpp"

namespace cardsep {

struct BlockCoord {
  int bx = 0;
  int by = 0;
  bool operator==(const BlockCoord&) const = default;
};

/// One 4-connected set of foreground blocks with its pixel bounding box.
struct Component {
  int id = 0;
  std::vector<BlockCoord> blocks;
  Rect bbox;
  int width = 0;
  int height = 0;
  int block_size = 8;
};

struct Features {
  int width = 0;
  int height = 0;
  double r_wh = 0.0;
  double gray_density = 0.0;
  double black_density = 0.0;
  double ra_cc = 0.0;
  int v_segments = 0;
  int h_segments = 0;
  int middle_row_cuts = 0;
};

inline std::vector<Component> grow_regions(const BlockGrid& grid) {
  std::vector<Component> out;
  std::vector<std::uint8_t> seen(grid.labels.size(), 0);
  std::vector<BlockCoord> stack;

  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      const std::size_t idx = static_cast<std::size_t>(by) * grid.cols + bx;
      if (seen[idx] || !grid.is_foreground(bx, by)) continue;

      Component c;
      c.id = static_cast<int>(out.size());
      c.block_size = grid.block_size;
      int min_x = grid.image_w, min_y = grid.image_h, max_x = 0, max_y = 0;

      stack.clear();
      stack.push_back({bx, by});
      seen[idx] = 1;
      while (!stack.empty()) {
        const BlockCoord b = stack.back();
        stack.pop_back();
        c.blocks.push_back(b);
        const Rect r = grid.block_rect(b.bx, b.by);
        min_x = std::min(min_x, r.x);
        min_y = std::min(min_y, r.y);
        max_x = std::max(max_x, r.right());
        max_y = std::max(max_y, r.bottom());

        const int nx[4] = {b.bx - 1, b.bx + 1, b.bx, b.bx};
        const int ny[4] = {b.by, b.by, b.by - 1, b.by + 1};
        for (int k = 0; k < 4; ++k) {
          if (!grid.in_bounds(nx[k], ny[k])) continue;
          const std::size_t nidx =
              static_cast<std::size_t>(ny[k]) * grid.cols + nx[k];
          if (seen[nidx] || !grid.is_foreground(nx[k], ny[k])) continue;
          seen[nidx] = 1;
          stack.push_back({nx[k], ny[k]});
        }
      }

      c.bbox = Rect{min_x, min_y, max_x - min_x, max_y - min_y};
      c.width = c.bbox.w;
      c.height = c.bbox.h;
      out.push_back(std::move(c));
    }
  }
  return out;
}

namespace detail {

/// Membership bitmap over the component's block span, for O(1) pixel lookup.
struct ComponentMask {
  int bx0 = 0, by0 = 0, bcols = 0, brows = 0, block_size = 8;
  std::vector<std::uint8_t> member;

  explicit ComponentMask(const Component& c) : block_size(c.block_size) {
    int bx1 = 0, by1 = 0;
    bx0 = by0 = INT32_MAX;
    for (const auto& b : c.blocks) {
      bx0 = std::min(bx0, b.bx);
      by0 = std::min(by0, b.by);
      bx1 = std::max(bx1, b.bx);
      by1 = std::max(by1, b.by);
    }
    bcols = bx1 - bx0 + 1;
    brows = by1 - by0 + 1;
    member.assign(static_cast<std::size_t>(bcols) * brows, 0);
    for (const auto& b : c.blocks)
      member[static_cast<std::size_t>(b.by - by0) * bcols + (b.bx - bx0)] = 1;
  }

  bool covers_pixel(int x, int y) const {
    const int bx = x / block_size - bx0;
    const int by = y / block_size - by0;
    if (bx < 0 || bx >= bcols || by < 0 || by >= brows) return false;
    return member[static_cast<std::size_t>(by) * bcols + bx] != 0;
  }
};

inline int count_dark_runs(const std::vector<std::uint8_t>& dark) {
  int runs = 0;
  bool in_run = false;
  for (std::uint8_t d : dark) {
    if (d && !in_run) {
      ++runs;
      in_run = true;
    } else if (!d) {
      in_run = false;
    }
  }
  return runs;
}

/// Mid-intensity ink test over a component's block pixels. Zero-contrast
/// components are solid ink; the strict mid test would otherwise leave
/// them empty.
struct DarkRule {
  int threshold = 0;
  bool solid = false;
  bool operator()(int v) const { return solid || v < threshold; }
};

inline DarkRule component_dark_rule(const Component& c, const GrayImage& image,
                                    const ComponentMask& mask) {
  int cc_min = 255, cc_max = 0;
  for (int y = c.bbox.y; y < c.bbox.bottom(); ++y) {
    const std::uint8_t* row = image.row(y);
    for (int x = c.bbox.x; x < c.bbox.right(); ++x) {
      if (!mask.covers_pixel(x, y)) continue;
      const int v = row[x];
      cc_min = std::min(cc_min, v);
      cc_max = std::max(cc_max, v);
    }
  }
  return DarkRule{(cc_min + cc_max) / 2, cc_min == cc_max};
}

}  // namespace detail

inline Features compute_features(const Component& c, const GrayImage& image) {
  if (c.width < 1 || c.height < 1)
    throw std::invalid_argument("compute_features: degenerate bbox");
  if (c.bbox.x < 0 || c.bbox.y < 0 || c.bbox.right() > image.width() ||
      c.bbox.bottom() > image.height())
    throw std::invalid_argument("compute_features: bbox outside image");
  if (c.blocks.empty())
    throw std::invalid_argument("compute_features: component has no blocks");

  const detail::ComponentMask mask(c);
  const Rect& bb = c.bbox;
  const detail::DarkRule is_dark = detail::component_dark_rule(c, image, mask);

  long long covered = 0, dark = 0;
  for (int y = bb.y; y < bb.bottom(); ++y) {
    const std::uint8_t* row = image.row(y);
    for (int x = bb.x; x < bb.right(); ++x) {
      if (!mask.covers_pixel(x, y)) continue;
      ++covered;
      if (is_dark(row[x])) ++dark;
    }
  }

  Features f;
  f.width = c.width;
  f.height = c.height;
  f.r_wh = static_cast<double>(c.width) / c.height;
  f.gray_density = static_cast<double>(covered) / static_cast<double>(bb.area());
  f.black_density = static_cast<double>(dark) / static_cast<double>(bb.area());
  f.ra_cc = 100.0 * f.black_density;

  const int y_mid = bb.y + bb.h / 2;
  std::vector<std::uint8_t> row_dark(bb.w, 0);
  for (int x = bb.x; x < bb.right(); ++x)
    row_dark[x - bb.x] =
        mask.covers_pixel(x, y_mid) && is_dark(image.at(x, y_mid));
  f.h_segments = detail::count_dark_runs(row_dark);
  f.middle_row_cuts = 2 * f.h_segments;

  const int x_mid = bb.x + bb.w / 2;
  std::vector<std::uint8_t> col_dark(bb.h, 0);
  for (int y = bb.y; y < bb.bottom(); ++y)
    col_dark[y - bb.y] =
        mask.covers_pixel(x_mid, y) && is_dark(image.at(x_mid, y));
  f.v_segments = detail::count_dark_runs(col_dark);

  return f;
}

}  // namespace cardsep
