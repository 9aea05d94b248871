#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cardsep/image.hpp"
#include "cardsep/regions.hpp"

namespace cardsep {

struct SkewConfig {
  int min_gray_extent = 2;
  double deviation_factor = 1.0;

  void validate() const {
    if (min_gray_extent < 1)
      throw std::invalid_argument("SkewConfig: min_gray_extent < 1");
    if (!(deviation_factor > 0.0))
      throw std::invalid_argument("SkewConfig: deviation_factor must be > 0");
  }
};

/// Per-column ink heights measured up from the bbox bottom edge.
struct BottomProfile {
  std::vector<double> heights;
  std::vector<std::uint8_t> valid;
  std::vector<int> x_positions;  // bbox-relative column indices

  int size() const { return static_cast<int>(heights.size()); }
};

struct ProfileStats {
  double mu = 0.0;
  double tau = 0.0;
};

struct SkewEstimate {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  bool valid = false;
};

/// Heights run to the first ink pixel from the bottom; a column whose
/// contiguous ink extent at that point is too small is marked invalid.
inline BottomProfile extract_bottom_profile(const Component& c,
                                            const GrayImage& image,
                                            const SkewConfig& cfg) {
  cfg.validate();
  if (c.blocks.empty())
    throw std::invalid_argument("extract_bottom_profile: component has no blocks");
  if (c.bbox.w < 1 || c.bbox.h < 1 || c.bbox.x < 0 || c.bbox.y < 0 ||
      c.bbox.right() > image.width() || c.bbox.bottom() > image.height())
    throw std::invalid_argument("extract_bottom_profile: bbox outside image");

  const detail::ComponentMask mask(c);
  const detail::DarkRule is_dark = detail::component_dark_rule(c, image, mask);
  const Rect& bb = c.bbox;

  BottomProfile p;
  p.heights.assign(bb.w, 0.0);
  p.valid.assign(bb.w, 0);
  p.x_positions.resize(bb.w);
  for (int i = 0; i < bb.w; ++i) {
    p.x_positions[i] = i;
    const int x = bb.x + i;
    int found = -1;
    for (int y = bb.bottom() - 1; y >= bb.y; --y) {
      if (mask.covers_pixel(x, y) && is_dark(image.at(x, y))) {
        found = y;
        break;
      }
    }
    if (found < 0) continue;
    int extent = 0;
    for (int y = found; y >= bb.y; --y) {
      if (mask.covers_pixel(x, y) && is_dark(image.at(x, y)))
        ++extent;
      else
        break;
    }
    p.heights[i] = static_cast<double>(bb.bottom() - 1 - found);
    p.valid[i] = extent >= cfg.min_gray_extent;
  }
  return p;
}

/// Mean and mean absolute deviation over valid columns; empty when none.
inline std::optional<ProfileStats> profile_stats(const BottomProfile& p) {
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < p.size(); ++i) {
    if (!p.valid[i]) continue;
    sum += p.heights[i];
    ++n;
  }
  if (n == 0) return std::nullopt;
  const double mu = sum / n;
  double dev = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p.valid[i]) dev += std::abs(mu - p.heights[i]);
  return ProfileStats{mu, dev / n};
}

inline SkewEstimate estimate_skew(const BottomProfile& p,
                                  const SkewConfig& cfg) {
  cfg.validate();
  SkewEstimate e;
  const auto stats = profile_stats(p);
  if (!stats) return e;
  e.mu = stats->mu;
  e.tau = stats->tau;

  const double band = cfg.deviation_factor * stats->tau;
  std::vector<int> survivors;
  for (int i = 0; i < p.size(); ++i)
    if (p.valid[i] && std::abs(p.heights[i] - stats->mu) <= band)
      survivors.push_back(i);
  if (survivors.size() < 3) return e;

  const int i1 = survivors.front();
  const int i2 = survivors.back();
  const int i3 = survivors[survivors.size() / 2];
  const double x1 = p.x_positions[i1], h1 = p.heights[i1];
  const double x2 = p.x_positions[i2], h2 = p.heights[i2];
  const double x3 = p.x_positions[i3], h3 = p.heights[i3];
  if (x1 == x2 || x1 == x3 || x3 == x2) return e;

  constexpr double kDeg = 180.0 / std::numbers::pi;
  e.theta1 = std::atan2(h1 - h2, x2 - x1) * kDeg;
  e.theta2 = std::atan2(h1 - h3, x3 - x1) * kDeg;
  e.theta3 = std::atan2(h3 - h2, x2 - x3) * kDeg;
  e.theta = (e.theta1 + e.theta2 + e.theta3) / 3.0;
  e.valid = true;
  return e;
}

/// Rotate a crop by -theta about its center; nearest neighbor, revealed
/// corners filled with the crop's maximum intensity.
inline GrayImage rotate_crop(const GrayImage& crop, double theta_deg) {
  if (std::abs(theta_deg) > 45.0)
    throw std::invalid_argument("rotate_crop: |theta| > 45 degrees");
  const double th = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(th), s = std::sin(th);
  const int w = crop.width(), h = crop.height();
  const int out_w = static_cast<int>(std::ceil(w * std::abs(c) + h * std::abs(s)));
  const int out_h = static_cast<int>(std::ceil(w * std::abs(s) + h * std::abs(c)));
  const double csx = (w - 1) * 0.5, csy = (h - 1) * 0.5;
  const double cdx = (out_w - 1) * 0.5, cdy = (out_h - 1) * 0.5;

  GrayImage out(out_w, out_h, crop.min_max().second);
  for (int dy = 0; dy < out_h; ++dy) {
    const double v = dy - cdy;
    for (int dx = 0; dx < out_w; ++dx) {
      const double u = dx - cdx;
      const int sx = static_cast<int>(std::lround(c * u - s * v + csx));
      const int sy = static_cast<int>(std::lround(s * u + c * v + csy));
      if (crop.in_bounds(sx, sy)) out.set(dx, dy, crop.at(sx, sy));
    }
  }
  return out;
}

inline GrayImage rotate_component(const GrayImage& image, const Component& c,
                                  double theta_deg) {
  return rotate_crop(image.crop(c.bbox), theta_deg);
}

}  // namespace cardsep
