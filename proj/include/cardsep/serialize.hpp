#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardsep/eval.hpp"
#include "cardsep/imageio.hpp"
#include "cardsep/pipeline.hpp"

namespace cardsep {

using ordered_json = nlohmann::ordered_json;

inline RegionClass parse_region_class(const std::string& s) {
  if (s == "text") return RegionClass::Text;
  if (s == "graphics") return RegionClass::Graphics;
  throw FormatError("unknown region class: " + s);
}

inline ordered_json rect_to_json(const Rect& r) {
  return ordered_json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

inline ordered_json region_to_json(const ProcessedRegion& pr) {
  ordered_json j;
  j["id"] = pr.component.id;
  j["bbox"] = rect_to_json(pr.component.bbox);
  j["features"] = ordered_json{{"width", pr.features.width},
                               {"height", pr.features.height},
                               {"r_wh", pr.features.r_wh},
                               {"gray_density", pr.features.gray_density},
                               {"black_density", pr.features.black_density},
                               {"ra_cc", pr.features.ra_cc},
                               {"v_segments", pr.features.v_segments},
                               {"h_segments", pr.features.h_segments},
                               {"middle_row_cuts", pr.features.middle_row_cuts}};
  j["class"] = to_string(pr.label.cls);
  j["reason"] = to_string(pr.label.reason);
  if (pr.skew_attempted) {
    j["skew"] = ordered_json{{"theta", pr.skew.theta},
                             {"theta1", pr.skew.theta1},
                             {"theta2", pr.skew.theta2},
                             {"theta3", pr.skew.theta3},
                             {"mu", pr.skew.mu},
                             {"tau", pr.skew.tau},
                             {"valid", pr.skew.valid}};
  }
  return j;
}

/// components.json payload; deliberately carries no timings so identical
/// inputs produce identical bytes.
inline ordered_json result_to_json(const std::string& stem,
                                   const GrayImage& image,
                                   const PipelineResult& res) {
  ordered_json j;
  j["image"] = stem;
  j["width"] = image.width();
  j["height"] = image.height();
  j["regions"] = ordered_json::array();
  for (const ProcessedRegion& pr : res.regions)
    j["regions"].push_back(region_to_json(pr));
  return j;
}

inline void write_json_file(const ordered_json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

inline void write_truth(const GroundTruth& truth, const std::string& path) {
  ordered_json j;
  j["image"] = truth.image_id;
  j["regions"] = ordered_json::array();
  for (const TruthRegion& r : truth.regions) {
    ordered_json e = rect_to_json(r.box);
    e["class"] = to_string(r.cls);
    j["regions"].push_back(e);
  }
  write_json_file(j, path);
}

inline GroundTruth read_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  ordered_json j;
  in >> j;
  GroundTruth t;
  t.image_id = j.at("image").get<std::string>();
  for (const auto& e : j.at("regions")) {
    TruthRegion r;
    r.box = Rect{e.at("x").get<int>(), e.at("y").get<int>(),
                 e.at("w").get<int>(), e.at("h").get<int>()};
    r.cls = parse_region_class(e.at("class").get<std::string>());
    t.regions.push_back(r);
  }
  return t;
}

/// Reads a components.json back as label+box predictions for scoring.
inline std::vector<PredictedRegion> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  ordered_json j;
  in >> j;
  std::vector<PredictedRegion> out;
  for (const auto& e : j.at("regions")) {
    const auto& b = e.at("bbox");
    out.push_back({Rect{b.at("x").get<int>(), b.at("y").get<int>(),
                        b.at("w").get<int>(), b.at("h").get<int>()},
                   parse_region_class(e.at("class").get<std::string>())});
  }
  return out;
}

}  // namespace cardsep
