#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <sys/resource.h>

#include "cardsep/background.hpp"
#include "cardsep/binarize.hpp"
#include "cardsep/classify.hpp"
#include "cardsep/eval.hpp"
#include "cardsep/regions.hpp"
#include "cardsep/skew.hpp"

namespace cardsep {

struct PipelineConfig {
  BackgroundConfig background;
  ClassifyConfig classify;  // reference values, scaled to the input size
  SkewConfig skew;
  double iou_threshold = 0.5;

  void validate() const {
    background.validate();
    classify.validate();
    skew.validate();
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
      throw std::invalid_argument("PipelineConfig: iou_threshold outside (0, 1]");
  }
};

struct ProcessedRegion {
  Component component;
  Features features;
  Label label;
  bool skew_attempted = false;
  SkewEstimate skew;
  GrayImage deskewed;   // text regions only
  BinaryRegion binary;  // text regions only
};

struct StageTimings {
  double background_ms = 0.0;
  double regions_ms = 0.0;
  double classify_ms = 0.0;
  double skew_ms = 0.0;
  double binarize_ms = 0.0;
  double total_ms = 0.0;
  std::optional<long long> peak_rss_bytes;
};

struct PipelineResult {
  BlockGrid grid;
  std::vector<ProcessedRegion> regions;
  StageTimings timings;
};

/// Stages run in order background, regions, classify, skew, binarize.
/// Graphics components are kept with their labels; text components whose
/// skew estimate fails are carried upright and flagged, never dropped.
inline PipelineResult run_pipeline(const GrayImage& image,
                                   const PipelineConfig& cfg) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  PipelineResult res;
  const auto t0 = clock::now();
  res.grid = eliminate_background(image, cfg.background);

  const auto t1 = clock::now();
  {
    std::vector<Component> comps = grow_regions(res.grid);
    res.regions.reserve(comps.size());
    for (Component& c : comps) {
      ProcessedRegion pr;
      pr.component = std::move(c);
      pr.features = compute_features(pr.component, image);
      res.regions.push_back(std::move(pr));
    }
  }

  const auto t2 = clock::now();
  const ClassifyConfig scaled = cfg.classify.scaled_for(image.pixel_count());
  for (ProcessedRegion& pr : res.regions)
    pr.label =
        classify_component(pr.features, scaled, cfg.background.block_size);

  const auto t3 = clock::now();
  for (ProcessedRegion& pr : res.regions) {
    if (pr.label.cls != RegionClass::Text) continue;
    pr.skew_attempted = true;
    const BottomProfile prof =
        extract_bottom_profile(pr.component, image, cfg.skew);
    SkewEstimate est = estimate_skew(prof, cfg.skew);
    if (est.valid && std::abs(est.theta) > 45.0) est.valid = false;
    pr.skew = est;
    pr.deskewed =
        rotate_component(image, pr.component, est.valid ? est.theta : 0.0);
  }

  const auto t4 = clock::now();
  for (ProcessedRegion& pr : res.regions)
    if (pr.label.cls == RegionClass::Text)
      pr.binary = binarize_region(pr.deskewed);

  const auto t5 = clock::now();
  res.timings.background_ms = ms(t0, t1);
  res.timings.regions_ms = ms(t1, t2);
  res.timings.classify_ms = ms(t2, t3);
  res.timings.skew_ms = ms(t3, t4);
  res.timings.binarize_ms = ms(t4, t5);
  res.timings.total_ms = ms(t0, t5);
  rusage ru{};
  if (getrusage(RUSAGE_SELF, &ru) == 0)
    res.timings.peak_rss_bytes = static_cast<long long>(ru.ru_maxrss) * 1024;
  return res;
}

inline std::vector<PredictedRegion> to_predictions(const PipelineResult& res) {
  std::vector<PredictedRegion> out;
  out.reserve(res.regions.size());
  for (const ProcessedRegion& pr : res.regions)
    out.push_back({pr.component.bbox, pr.label.cls});
  return out;
}

}  // namespace cardsep
