#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cardsep/eval.hpp"
#include "cardsep/image.hpp"

namespace cardsep {

struct LayoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BackgroundKind { Flat, Gradient, Noise };

struct BackgroundSpec {
  BackgroundKind kind = BackgroundKind::Flat;
  int base = 220;     // Flat intensity, Gradient start, Noise center
  int to = 220;       // Gradient end
  int axis = 0;       // Gradient: 0 = along x, 1 = along y
  int amplitude = 0;  // Noise: +/- around base

  int min_intensity() const {
    switch (kind) {
      case BackgroundKind::Flat: return base;
      case BackgroundKind::Gradient: return std::min(base, to);
      case BackgroundKind::Noise: return base - amplitude;
    }
    return base;
  }
  int max_intensity() const {
    switch (kind) {
      case BackgroundKind::Flat: return base;
      case BackgroundKind::Gradient: return std::max(base, to);
      case BackgroundKind::Noise: return base + amplitude;
    }
    return base;
  }
};

struct SynthSpec {
  std::uint32_t seed = 1;
  int width = 1024;
  int height = 768;
  BackgroundSpec background;
  int text_lines = 4;
  int rule_lines = 1;
  int solid_logos = 0;
  int noise_photos = 0;
  double skew_deg = 0.0;
  int ink_base = 45;  // glyph intensities jitter around this

  void validate() const {
    if (width < 320 || height < 240)
      throw std::invalid_argument("SynthSpec: canvas must be at least 320x240");
    if (text_lines < 0 || rule_lines < 0 || solid_logos < 0 || noise_photos < 0)
      throw std::invalid_argument("SynthSpec: negative element count");
    if (std::abs(skew_deg) > 10.0)
      throw std::invalid_argument("SynthSpec: skew_deg outside [-10, 10]");
    if (background.min_intensity() < 0 || background.max_intensity() > 255)
      throw std::invalid_argument("SynthSpec: background intensity outside [0, 255]");
    if (ink_base < 10 || ink_base > 80)
      throw std::invalid_argument("SynthSpec: ink_base outside [10, 80]");
    if (background.min_intensity() - (ink_base + 10) < 60)
      throw std::invalid_argument(
          "SynthSpec: background must exceed ink by at least 60");
  }
};

struct SynthCard {
  GrayImage image;
  GroundTruth truth;
};

namespace detail {

// Hand-rolled bound so output does not depend on library distribution
// internals; bias is irrelevant here.
inline int rand_int(std::mt19937& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint32_t>(hi - lo + 1));
}

}  // namespace detail

inline SynthCard generate_card(const SynthSpec& spec) {
  spec.validate();
  std::mt19937 rng(spec.seed);
  const int w = spec.width, h = spec.height;
  const double s = std::sqrt(static_cast<double>(w) * h / 786432.0);
  auto sc = [&](double v) {
    return std::max(1, static_cast<int>(std::lround(v * s)));
  };

  GrayImage bg(w, h);
  switch (spec.background.kind) {
    case BackgroundKind::Flat:
      bg = GrayImage(w, h, static_cast<std::uint8_t>(spec.background.base));
      break;
    case BackgroundKind::Gradient: {
      const int from = spec.background.base, to = spec.background.to;
      for (int y = 0; y < h; ++y) {
        std::uint8_t* row = bg.row(y);
        for (int x = 0; x < w; ++x) {
          const int t = spec.background.axis == 0 ? x : y;
          const int span = spec.background.axis == 0 ? w - 1 : h - 1;
          row[x] = static_cast<std::uint8_t>(from + (to - from) * t / span);
        }
      }
      break;
    }
    case BackgroundKind::Noise: {
      const int base = spec.background.base, amp = spec.background.amplitude;
      for (int y = 0; y < h; ++y) {
        std::uint8_t* row = bg.row(y);
        for (int x = 0; x < w; ++x)
          row[x] = static_cast<std::uint8_t>(
              base + detail::rand_int(rng, -amp, amp));
      }
      break;
    }
  }

  GrayImage ink(w, h, 255);  // 255 = no ink
  auto fill_rect = [&](const Rect& r, int v) {
    for (int y = r.y; y < r.bottom(); ++y)
      for (int x = r.x; x < r.right(); ++x)
        if (ink.in_bounds(x, y)) ink.set(x, y, static_cast<std::uint8_t>(v));
  };

  const double th = spec.skew_deg * std::numbers::pi / 180.0;
  const double co = std::cos(th), sn = std::sin(th);
  const double ccx = (w - 1) * 0.5, ccy = (h - 1) * 0.5;

  auto rot_aabb = [&](const Rect& r) {
    double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
    const double xs[2] = {static_cast<double>(r.x),
                          static_cast<double>(r.right() - 1)};
    const double ys[2] = {static_cast<double>(r.y),
                          static_cast<double>(r.bottom() - 1)};
    for (double px : xs) {
      for (double py : ys) {
        const double u = px - ccx, v = py - ccy;
        const double rx = ccx + co * u - sn * v;
        const double ry = ccy + sn * u + co * v;
        min_x = std::min(min_x, rx);
        min_y = std::min(min_y, ry);
        max_x = std::max(max_x, rx);
        max_y = std::max(max_y, ry);
      }
    }
    // Half-pixel slack for nearest-neighbor rendering, then clamp.
    int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    int x1 = std::min(w - 1, static_cast<int>(std::ceil(max_x + 0.5)));
    int y1 = std::min(h - 1, static_cast<int>(std::ceil(max_y + 0.5)));
    return Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  };

  struct Placed {
    Rect rect;
    Rect aabb;
    RegionClass cls;
  };
  std::vector<Placed> placed;

  const int m = sc(78);
  const int content_x0 = m + sc(100);
  const int content_x1 = w - m - sc(100);
  const int content_y0 = sc(58);
  const int content_y1 = h - sc(58);
  const int rule_y0 = sc(72);
  const int rule_y1 = h - sc(72);

  // Elements must stay far enough apart that their ink never lands in the
  // same or adjacent blocks, and truth boxes keep IoU <= 0.08.
  auto conflicts = [&](const Rect& rect, const Rect& aabb) {
    for (const Placed& p : placed) {
      if (iou(aabb, p.aabb) > 0.08) return true;
      const int gapx = std::max(p.rect.x - rect.right(), rect.x - p.rect.right());
      const int gapy =
          std::max(p.rect.y - rect.bottom(), rect.y - p.rect.bottom());
      if (std::max(gapx, gapy) < 21) return true;
    }
    return false;
  };

  // Gutter rules, at most one per side.
  for (int i = 0; i < spec.rule_lines; ++i) {
    const int wr = std::max(3, sc(12));
    const int band = rule_y1 - rule_y0;
    const int hr = detail::rand_int(rng, band * 11 / 20, band * 17 / 20);
    const int y = rule_y0 + detail::rand_int(rng, 0, band - hr);
    const int xc = (i % 2 == 0) ? m + sc(30) : w - m - sc(30);
    const Rect rect{xc - wr / 2, y, wr, hr};
    placed.push_back({rect, rot_aabb(rect), RegionClass::Graphics});
    fill_rect(rect, std::clamp(spec.ink_base + detail::rand_int(rng, -10, 5),
                               10, 85));
  }

  int cursor = content_y0 + detail::rand_int(rng, 0, sc(20));
  auto place_flow = [&](int W, int H, RegionClass cls) {
    for (int attempt = 0; attempt < 400; ++attempt) {
      const int y = cursor + (attempt / 25) * sc(8);
      if (y + H > content_y1)
        throw LayoutError("synthgen: layout overflow");
      const int slack = content_x1 - content_x0 - W;
      if (slack < 0)
        throw LayoutError("synthgen: element wider than content column");
      const int x =
          content_x0 + (slack > 0 ? detail::rand_int(rng, 0, slack) : 0);
      const Rect rect{x, y, W, H};
      const Rect aabb = rot_aabb(rect);
      if (conflicts(rect, aabb)) continue;
      placed.push_back({rect, aabb, cls});
      cursor = y + H + sc(21);
      return rect;
    }
    throw LayoutError("synthgen: could not place element");
  };

  // Glyphs keep all ink columns grounded on a full-width baseline bar; the
  // spine and upper bars are inset so that no rotated column is left hanging
  // above the baseline (which would corrupt the bottom profile).
  auto draw_glyph = [&](int gx, int gy, int gw, int gh, int sw, int v) {
    const int bh = 3;
    const int e = static_cast<int>(std::ceil(gh * 0.1763)) + 1;  // tan 10 deg
    fill_rect({gx, gy + gh - bh, gw, bh}, v);  // baseline bar, always
    fill_rect({gx + e, gy, sw, gh}, v);        // spine down onto the bar
    if (detail::rand_int(rng, 0, 1)) fill_rect({gx + e, gy, gw - 2 * e, bh}, v);
    if (detail::rand_int(rng, 0, 1))
      fill_rect({gx + e, gy + gh / 2 - bh / 2, gw - 2 * e, bh}, v);
  };

  auto draw_text_line = [&](const Rect& r) {
    const int H = r.h;
    const int sw = std::max(2, H / 5);
    const int inset = static_cast<int>(std::ceil(H * 0.1763)) + 1;
    const int gw = std::max({2 * sw + 2, 2 * inset + sw + 2,
                             static_cast<int>(std::lround(0.55 * H))});
    const int intra = std::clamp(sc(2), 1, 4);
    const int word_gap = std::clamp(static_cast<int>(std::lround(5 * s)), 4, 6);
    int cx = r.x;
    int in_word = 0;
    int word_len = detail::rand_int(rng, 3, 7);
    while (cx + gw <= r.right()) {
      const int v =
          std::clamp(spec.ink_base + detail::rand_int(rng, -10, 10), 10, 90);
      draw_glyph(cx, r.y, gw, H, sw, v);
      cx += gw + intra;
      if (++in_word >= word_len) {
        cx += word_gap - intra;
        in_word = 0;
        word_len = detail::rand_int(rng, 3, 7);
      }
    }
  };

  // Interleave the big elements among the text lines.
  std::vector<int> flow(spec.text_lines, 0);
  for (int i = 0; i < spec.solid_logos; ++i)
    flow.insert(flow.begin() +
                    detail::rand_int(rng, 0, static_cast<int>(flow.size())),
                1);
  for (int i = 0; i < spec.noise_photos; ++i)
    flow.insert(flow.begin() +
                    detail::rand_int(rng, 0, static_cast<int>(flow.size())),
                2);

  for (int kind : flow) {
    if (kind == 0) {
      const int H = std::max(5, static_cast<int>(std::lround(
                                    detail::rand_int(rng, 12, 30) * s)));
      const int w_min =
          std::max(sc(220), static_cast<int>(std::lround(2.5 * H + 40)));
      const int w_max = std::max(
          w_min, std::min({sc(360), 22 * H, content_x1 - content_x0}));
      const int W = detail::rand_int(rng, w_min, w_max);
      draw_text_line(place_flow(W, H, RegionClass::Text));
    } else {
      const int H = std::max(8, static_cast<int>(std::lround(
                                    detail::rand_int(rng, 104, 128) * s)));
      const int ratio = kind == 1 ? detail::rand_int(rng, 95, 125)
                                  : detail::rand_int(rng, 110, 150);
      const int W = std::min(content_x1 - content_x0,
                             static_cast<int>(std::lround(H * ratio / 100.0)));
      const Rect rect = place_flow(W, H, RegionClass::Graphics);
      if (kind == 1) {
        fill_rect(rect, std::clamp(spec.ink_base + detail::rand_int(rng, -15, 5),
                                   10, 85));
      } else {
        for (int y = rect.y; y < rect.bottom(); ++y)
          for (int x = rect.x; x < rect.right(); ++x)
            ink.set(x, y, static_cast<std::uint8_t>(
                              detail::rand_int(rng, 10, 80)));
      }
    }
  }

  // Compose: rotated ink over the unrotated background.
  SynthCard card;
  card.image = std::move(bg);
  if (!placed.empty()) {
    for (int y = 0; y < h; ++y) {
      const double v = y - ccy;
      for (int x = 0; x < w; ++x) {
        const double u = x - ccx;
        const int sx = static_cast<int>(std::lround(co * u + sn * v + ccx));
        const int sy = static_cast<int>(std::lround(-sn * u + co * v + ccy));
        if (!ink.in_bounds(sx, sy)) continue;
        const std::uint8_t iv = ink.at(sx, sy);
        if (iv != 255) card.image.set(x, y, iv);
      }
    }
  }

  card.truth.image_id = std::to_string(spec.seed);
  for (const Placed& p : placed)
    card.truth.regions.push_back({p.aabb, p.cls});
  return card;
}

/// Fixed corpus recipe: skew grid {-10,-8,...,+10} by seed, all background
/// kinds cycled, 4-5 text lines, 1-2 gutter rules, one logo or photo.
inline SynthSpec default_card_spec(std::uint32_t seed, int width = 1024,
                                   int height = 768) {
  SynthSpec sp;
  sp.seed = seed;
  sp.width = width;
  sp.height = height;
  std::mt19937 r(seed * 2654435761u + 0x9E3779B9u);
  static const double grid[11] = {-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};
  sp.skew_deg = grid[seed % 11];
  sp.text_lines = 4 + static_cast<int>(seed % 2);
  sp.rule_lines = 1 + (seed % 3 == 0 ? 1 : 0);
  sp.solid_logos = static_cast<int>(seed % 2);
  sp.noise_photos = 1 - sp.solid_logos;
  sp.ink_base = detail::rand_int(r, 25, 80);
  switch (seed % 3) {
    case 0:
      sp.background.kind = BackgroundKind::Flat;
      sp.background.base = detail::rand_int(r, 155, 240);
      break;
    case 1:
      sp.background.kind = BackgroundKind::Gradient;
      sp.background.base = detail::rand_int(r, 155, 195);
      sp.background.to = sp.background.base + detail::rand_int(r, 20, 40);
      sp.background.axis = detail::rand_int(r, 0, 1);
      break;
    default:
      sp.background.kind = BackgroundKind::Noise;
      sp.background.base = detail::rand_int(r, 165, 225);
      sp.background.amplitude = detail::rand_int(r, 4, 8);
      break;
  }
  return sp;
}

}  // namespace cardsep
