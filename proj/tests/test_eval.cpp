#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "cardsep/eval.hpp"

using namespace cardsep;

namespace {

GroundTruth truth_of(std::vector<TruthRegion> regions) {
  GroundTruth t;
  t.image_id = "fixture";
  t.regions = std::move(regions);
  return t;
}

constexpr auto kText = RegionClass::Text;
constexpr auto kGraphics = RegionClass::Graphics;

}  // namespace

TEST_CASE("iou spot values") {
  CHECK(iou(Rect{0, 0, 4, 4}, Rect{0, 0, 4, 4}) == 1.0);
  CHECK(iou(Rect{0, 0, 4, 4}, Rect{4, 0, 4, 4}) == 0.0);
  CHECK(iou(Rect{0, 0, 2, 1}, Rect{1, 0, 2, 1}) == Catch::Approx(1.0 / 3.0));
  CHECK(iou(Rect{0, 0, 10, 10}, Rect{5, 5, 10, 10}) ==
        Catch::Approx(25.0 / 175.0));
}

TEST_CASE("perfect predictions score perfectly") {
  const GroundTruth t = truth_of({{Rect{0, 0, 50, 20}, kText},
                                  {Rect{0, 40, 30, 30}, kGraphics},
                                  {Rect{60, 0, 40, 15}, kText}});
  std::vector<PredictedRegion> preds;
  for (const TruthRegion& r : t.regions) preds.push_back({r.box, r.cls});
  const ConfusionTally tally = match_regions(preds, t);
  CHECK(tally == ConfusionTally{1, 0, 0, 2});
  CHECK(accuracy(tally) == 1.0);
}

TEST_CASE("matched pairs land in the confusion cell of their labels") {
  const Rect box{10, 10, 40, 20};
  const GroundTruth text_truth = truth_of({{box, kText}});
  const GroundTruth graphics_truth = truth_of({{box, kGraphics}});
  const std::vector<PredictedRegion> text_pred = {{box, kText}};
  const std::vector<PredictedRegion> graphics_pred = {{box, kGraphics}};

  CHECK(match_regions(text_pred, text_truth) == ConfusionTally{0, 0, 0, 1});
  CHECK(match_regions(graphics_pred, text_truth) ==
        ConfusionTally{0, 0, 1, 0});
  CHECK(match_regions(text_pred, graphics_truth) ==
        ConfusionTally{0, 1, 0, 0});
  CHECK(match_regions(graphics_pred, graphics_truth) ==
        ConfusionTally{1, 0, 0, 0});
}

TEST_CASE("unmatched regions follow the fallback rules") {
  // Unmatched text prediction counts against background.
  CHECK(match_regions({{Rect{0, 0, 10, 10}, kText}}, truth_of({})) ==
        ConfusionTally{0, 1, 0, 0});
  // Unmatched graphics prediction is background detected as background.
  CHECK(match_regions({{Rect{0, 0, 10, 10}, kGraphics}}, truth_of({})) ==
        ConfusionTally{1, 0, 0, 0});
  // A missed text truth is lost text.
  CHECK(match_regions({}, truth_of({{Rect{0, 0, 10, 10}, kText}})) ==
        ConfusionTally{0, 0, 1, 0});
  // A missed graphics truth contributes nothing.
  CHECK(match_regions({}, truth_of({{Rect{0, 0, 10, 10}, kGraphics}})) ==
        ConfusionTally{0, 0, 0, 0});
}

TEST_CASE("threshold boundary is inclusive") {
  // IoU exactly 0.5: 10x10 boxes overlapping over 2/3 of their width.
  const Rect a{0, 0, 9, 10};
  const Rect b{3, 0, 9, 10};
  REQUIRE(iou(a, b) == Catch::Approx(0.5));
  const GroundTruth t = truth_of({{a, kText}});
  CHECK(match_regions({{b, kText}}, t, 0.5) == ConfusionTally{0, 0, 0, 1});
  CHECK(match_regions({{b, kText}}, t, 0.500001) ==
        ConfusionTally{0, 1, 1, 0});
}

TEST_CASE("greedy matching takes the best pair first") {
  const GroundTruth t = truth_of({{Rect{0, 0, 10, 10}, kText}});
  const std::vector<PredictedRegion> preds = {
      {Rect{2, 0, 10, 10}, kText},  // IoU 8/12... lower
      {Rect{1, 0, 10, 10}, kText},  // IoU 9/11, higher: wins the truth
  };
  const MatchResult r = match_regions_detailed(preds, t, 0.5);
  CHECK(r.truth_match[0] == 1);
  CHECK(r.pred_match[1] == 0);
  CHECK(r.pred_match[0] == -1);
  CHECK(r.tally == ConfusionTally{0, 1, 0, 1});  // loser becomes a false text
}

TEST_CASE("equal scores break ties by prediction index") {
  const GroundTruth t = truth_of({{Rect{0, 0, 10, 10}, kText}});
  const std::vector<PredictedRegion> preds = {
      {Rect{1, 0, 10, 10}, kText},
      {Rect{-1, 0, 10, 10}, kText},  // mirrored offset, same IoU
  };
  REQUIRE(iou(preds[0].box, t.regions[0].box) ==
          Catch::Approx(iou(preds[1].box, t.regions[0].box)));
  const MatchResult r = match_regions_detailed(preds, t, 0.5);
  CHECK(r.pred_match[0] == 0);
  CHECK(r.pred_match[1] == -1);
}

TEST_CASE("matching is one-to-one") {
  const GroundTruth t = truth_of(
      {{Rect{0, 0, 10, 10}, kText}, {Rect{8, 0, 10, 10}, kText}});
  const std::vector<PredictedRegion> preds = {{Rect{0, 0, 10, 10}, kText}};
  const MatchResult r = match_regions_detailed(preds, t, 0.1);
  CHECK(r.pred_match[0] == 0);
  CHECK(r.truth_match[0] == 0);
  CHECK(r.truth_match[1] == -1);
  CHECK(r.tally == ConfusionTally{0, 0, 1, 1});
}

TEST_CASE("tally bookkeeping") {
  ConfusionTally a{1, 2, 3, 4};
  CHECK(a.total() == 10);
  a += ConfusionTally{10, 0, 0, 5};
  CHECK(a == ConfusionTally{11, 2, 3, 9});
  CHECK(accuracy(ConfusionTally{6, 1, 1, 12}) == Catch::Approx(0.9));
  CHECK_THROWS_AS(accuracy(ConfusionTally{}), std::domain_error);
}

TEST_CASE("threshold must sit in (0, 1]") {
  const GroundTruth t = truth_of({});
  CHECK_THROWS_AS(match_regions({}, t, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(match_regions({}, t, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(match_regions({}, t, 1.1), std::invalid_argument);
  CHECK_NOTHROW(match_regions({}, t, 1.0));
}
