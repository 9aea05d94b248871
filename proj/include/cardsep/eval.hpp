#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardsep/classify.hpp"
#include "cardsep/image.hpp"

namespace cardsep {

struct TruthRegion {
  Rect box;
  RegionClass cls = RegionClass::Text;
};

struct GroundTruth {
  std::string image_id;
  std::vector<TruthRegion> regions;
};

struct PredictedRegion {
  Rect box;
  RegionClass cls = RegionClass::Text;
};

struct ConfusionTally {
  long long bb = 0;
  long long bt = 0;
  long long tb = 0;
  long long tt = 0;

  long long total() const { return bb + bt + tb + tt; }
  ConfusionTally& operator+=(const ConfusionTally& o) {
    bb += o.bb;
    bt += o.bt;
    tb += o.tb;
    tt += o.tt;
    return *this;
  }
  bool operator==(const ConfusionTally&) const = default;
};

inline double iou(const Rect& a, const Rect& b) {
  const Rect inter = intersect(a, b);
  const long long ia = inter.area();
  if (ia == 0) return 0.0;
  const long long ua = a.area() + b.area() - ia;
  return static_cast<double>(ia) / static_cast<double>(ua);
}

struct MatchResult {
  ConfusionTally tally;
  std::vector<int> pred_match;   // truth index per prediction, -1 unmatched
  std::vector<int> truth_match;  // prediction index per truth region, -1 unmatched
};

/// One-to-one greedy matching by descending IoU (ties broken by index);
/// pairs below the threshold never match. Matched pairs tally by
/// (truth class, predicted class); unmatched predictions count against an
/// implicit background truth; unmatched text truths count as lost text.
inline MatchResult match_regions_detailed(
    const std::vector<PredictedRegion>& predicted, const GroundTruth& truth,
    double iou_threshold = 0.5) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0)
    throw std::invalid_argument("match_regions: iou_threshold outside (0, 1]");

  MatchResult r;
  r.pred_match.assign(predicted.size(), -1);
  r.truth_match.assign(truth.regions.size(), -1);

  struct Cand {
    double score;
    int pred;
    int tr;
  };
  std::vector<Cand> cands;
  for (int pi = 0; pi < static_cast<int>(predicted.size()); ++pi) {
    for (int ti = 0; ti < static_cast<int>(truth.regions.size()); ++ti) {
      const double s = iou(predicted[pi].box, truth.regions[ti].box);
      if (s >= iou_threshold) cands.push_back({s, pi, ti});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.tr < b.tr;
  });
  for (const Cand& c : cands) {
    if (r.pred_match[c.pred] != -1 || r.truth_match[c.tr] != -1) continue;
    r.pred_match[c.pred] = c.tr;
    r.truth_match[c.tr] = c.pred;
  }

  for (int pi = 0; pi < static_cast<int>(predicted.size()); ++pi) {
    const bool pred_text = predicted[pi].cls == RegionClass::Text;
    if (r.pred_match[pi] >= 0) {
      const bool truth_text =
          truth.regions[r.pred_match[pi]].cls == RegionClass::Text;
      if (truth_text)
        pred_text ? ++r.tally.tt : ++r.tally.tb;
      else
        pred_text ? ++r.tally.bt : ++r.tally.bb;
    } else {
      pred_text ? ++r.tally.bt : ++r.tally.bb;
    }
  }
  for (int ti = 0; ti < static_cast<int>(truth.regions.size()); ++ti) {
    if (r.truth_match[ti] == -1 &&
        truth.regions[ti].cls == RegionClass::Text)
      ++r.tally.tb;
  }
  return r;
}

inline ConfusionTally match_regions(const std::vector<PredictedRegion>& predicted,
                                    const GroundTruth& truth,
                                    double iou_threshold = 0.5) {
  return match_regions_detailed(predicted, truth, iou_threshold).tally;
}

inline double accuracy(const ConfusionTally& t) {
  if (t.total() == 0)
    throw std::domain_error("accuracy: tally is empty");
  return static_cast<double>(t.bb + t.tt) / static_cast<double>(t.total());
}

}  // namespace cardsep
