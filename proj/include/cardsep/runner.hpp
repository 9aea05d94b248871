#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cardsep/binarize.hpp"
#include "cardsep/imageio.hpp"
#include "cardsep/pipeline.hpp"
#include "cardsep/serialize.hpp"

namespace cardsep {

struct SeparateOptions {
  bool dump_blocks = false;
};

/// Runs the pipeline and writes the full artifact set for one image:
/// components.json, per-text-region deskewed and binarized crops, and a
/// color overlay. Artifacts carry no timings, so reruns are byte-identical.
inline PipelineResult separate_to_dir(const GrayImage& image,
                                      const std::string& stem,
                                      const std::filesystem::path& out_dir,
                                      const PipelineConfig& cfg,
                                      const SeparateOptions& opts = {}) {
  std::filesystem::create_directories(out_dir);
  PipelineResult res = run_pipeline(image, cfg);

  write_json_file(result_to_json(stem, image, res),
                  (out_dir / "components.json").string());

  for (const ProcessedRegion& pr : res.regions) {
    if (pr.label.cls != RegionClass::Text) continue;
    const std::string base = stem + "_cc" + std::to_string(pr.component.id);
    save_pgm(pr.deskewed, (out_dir / (base + "_deskewed.pgm")).string());
    save_binary_pgm(pr.binary, (out_dir / (base + "_binarized.pgm")).string());
  }

  std::vector<OverlayBox> boxes;
  boxes.reserve(res.regions.size());
  for (const ProcessedRegion& pr : res.regions)
    boxes.push_back({pr.component.bbox, pr.label.cls == RegionClass::Text});
  save_overlay(image, boxes, (out_dir / (stem + "_overlay.ppm")).string());

  if (opts.dump_blocks)
    save_block_debug(res.grid, (out_dir / (stem + "_blocks.pgm")).string());
  return res;
}

}  // namespace cardsep
