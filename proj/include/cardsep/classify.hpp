#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "cardsep/regions.hpp"

namespace cardsep {

struct ClassifyConfig {
  double r_min = 1.2;
  double r_max = 32.0;
  double ra_min = 5.0;
  double ra_max = 90.0;
  // Reference values at 0.75 MP (1024x768); use scaled_for() at other sizes.
  double min_dim = 6.0;
  double max_char_height = 96.0;

  void validate() const {
    if (!(r_min < r_max))
      throw std::invalid_argument("ClassifyConfig: r_min must be < r_max");
    if (!(ra_min < ra_max))
      throw std::invalid_argument("ClassifyConfig: ra_min must be < ra_max");
    if (min_dim < 1.0)
      throw std::invalid_argument("ClassifyConfig: min_dim must be >= 1");
  }

  /// Size thresholds scale with the square root of the pixel-count ratio.
  ClassifyConfig scaled_for(std::int64_t pixel_count) const {
    const double s = std::sqrt(static_cast<double>(pixel_count) / 786432.0);
    ClassifyConfig out = *this;
    out.min_dim = min_dim * s;
    out.max_char_height = max_char_height * s;
    return out;
  }
};

enum class RegionClass { Text, Graphics };

enum class ClassifyReason {
  TooSmall,
  LineShape,
  AspectOutOfRange,
  DensityOutOfRange,
  LogoLike,
  PassedAllRules
};

struct Label {
  RegionClass cls = RegionClass::Graphics;
  ClassifyReason reason = ClassifyReason::TooSmall;
  bool operator==(const Label&) const = default;
};

inline const char* to_string(RegionClass c) {
  return c == RegionClass::Text ? "text" : "graphics";
}

inline const char* to_string(ClassifyReason r) {
  switch (r) {
    case ClassifyReason::TooSmall: return "too_small";
    case ClassifyReason::LineShape: return "line_shape";
    case ClassifyReason::AspectOutOfRange: return "aspect_out_of_range";
    case ClassifyReason::DensityOutOfRange: return "density_out_of_range";
    case ClassifyReason::LogoLike: return "logo_like";
    case ClassifyReason::PassedAllRules: return "passed_all_rules";
  }
  return "unknown";
}

/// Rule cascade, first failing rule wins; only survivors are text.
inline Label classify_component(const Features& f, const ClassifyConfig& cfg,
                                int block_size = 8) {
  if (f.width < cfg.min_dim && f.height < cfg.min_dim)
    return {RegionClass::Graphics, ClassifyReason::TooSmall};

  const int thin = 2 * block_size;
  if ((f.height <= thin && f.r_wh > cfg.r_max) ||
      (f.width <= thin && f.r_wh > 0.0 && 1.0 / f.r_wh > cfg.r_max))
    return {RegionClass::Graphics, ClassifyReason::LineShape};

  if (f.r_wh <= cfg.r_min || f.r_wh >= cfg.r_max)
    return {RegionClass::Graphics, ClassifyReason::AspectOutOfRange};

  if (f.ra_cc <= cfg.ra_min || f.ra_cc >= cfg.ra_max)
    return {RegionClass::Graphics, ClassifyReason::DensityOutOfRange};

  if (f.height > cfg.max_char_height && f.h_segments <= 1 && f.v_segments <= 1)
    return {RegionClass::Graphics, ClassifyReason::LogoLike};

  return {RegionClass::Text, ClassifyReason::PassedAllRules};
}

}  // namespace cardsep
