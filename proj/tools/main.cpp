#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cardsep/cardsep.hpp"

namespace fs = std::filesystem;
using namespace cardsep;

namespace {

struct CliConfig {
  PipelineConfig pipeline;
  int workers = 1;
};

void apply_config_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  auto& p = cfg.pipeline;
  if (j.contains("block_size")) p.background.block_size = j["block_size"].get<int>();
  if (j.contains("t_fixed")) p.background.t_fixed = j["t_fixed"].get<int>();
  if (j.contains("t_min")) p.background.t_min = j["t_min"].get<int>();
  if (j.contains("r_min")) p.classify.r_min = j["r_min"].get<double>();
  if (j.contains("r_max")) p.classify.r_max = j["r_max"].get<double>();
  if (j.contains("ra_min")) p.classify.ra_min = j["ra_min"].get<double>();
  if (j.contains("ra_max")) p.classify.ra_max = j["ra_max"].get<double>();
  if (j.contains("min_dim")) p.classify.min_dim = j["min_dim"].get<double>();
  if (j.contains("max_char_height"))
    p.classify.max_char_height = j["max_char_height"].get<double>();
  if (j.contains("iou")) p.iou_threshold = j["iou"].get<double>();
  if (j.contains("deviation_factor"))
    p.skew.deviation_factor = j["deviation_factor"].get<double>();
  if (j.contains("min_gray_extent"))
    p.skew.min_gray_extent = j["min_gray_extent"].get<int>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
}

void add_pipeline_flags(CLI::App* cmd, CliConfig& cfg) {
  auto& p = cfg.pipeline;
  cmd->add_option("--block-size", p.background.block_size, "block size in pixels")
      ->capture_default_str();
  cmd->add_option("--t-fixed", p.background.t_fixed,
                  "fixed part of the block variance threshold")
      ->capture_default_str();
  cmd->add_option("--t-min", p.background.t_min,
                  "minimum block intensity treated as possible background")
      ->capture_default_str();
  cmd->add_option("--r-min", p.classify.r_min, "lower aspect ratio bound")
      ->capture_default_str();
  cmd->add_option("--r-max", p.classify.r_max, "upper aspect ratio bound")
      ->capture_default_str();
  cmd->add_option("--ra-min", p.classify.ra_min, "lower ink density bound (%)")
      ->capture_default_str();
  cmd->add_option("--ra-max", p.classify.ra_max, "upper ink density bound (%)")
      ->capture_default_str();
  cmd->add_option("--min-dim", p.classify.min_dim,
                  "minimum region dimension at 0.75 MP")
      ->capture_default_str();
  cmd->add_option("--max-char-height", p.classify.max_char_height,
                  "largest character height at 0.75 MP")
      ->capture_default_str();
  cmd->add_option("--iou", p.iou_threshold, "IoU match threshold")
      ->capture_default_str();
  cmd->add_option("--deviation-factor", p.skew.deviation_factor,
                  "profile filter band in mean deviations")
      ->capture_default_str();
  cmd->add_option("--min-gray-extent", p.skew.min_gray_extent,
                  "minimum ink extent for a valid profile column")
      ->capture_default_str();
}

int cmd_separate(const std::string& input, const std::string& out_dir,
                 const CliConfig& cfg, bool dump_blocks) {
  try {
    const GrayImage img = load_image(input);
    const std::string stem = fs::path(input).stem().string();
    SeparateOptions opts;
    opts.dump_blocks = dump_blocks;
    const PipelineResult res =
        separate_to_dir(img, stem, out_dir, cfg.pipeline, opts);
    int text = 0, graphics = 0;
    for (const ProcessedRegion& pr : res.regions)
      (pr.label.cls == RegionClass::Text ? text : graphics) += 1;
    std::printf("%s: %d text, %d graphics region(s) -> %s\n", stem.c_str(),
                text, graphics, out_dir.c_str());
    const StageTimings& t = res.timings;
    std::printf(
        "timings ms: background %.2f regions %.2f classify %.2f skew %.2f "
        "binarize %.2f total %.2f\n",
        t.background_ms, t.regions_ms, t.classify_ms, t.skew_ms, t.binarize_ms,
        t.total_ms);
    if (t.peak_rss_bytes)
      std::printf("peak rss: %.1f MB\n", *t.peak_rss_bytes / 1048576.0);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", input.c_str(), e.what());
    return 1;
  }
}

bool has_image_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".png";
}

int cmd_batch(const std::string& in_dir, const std::string& out_dir,
              const CliConfig& cfg) {
  std::vector<fs::path> files;
  try {
    for (const auto& e : fs::directory_iterator(in_dir))
      if (e.is_regular_file() && has_image_ext(e.path()))
        files.push_back(e.path());
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::fprintf(stderr, "no .pgm/.png images in %s\n", in_dir.c_str());
    return 1;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<std::string> failures;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const fs::path& f = files[i];
      const std::string stem = f.stem().string();
      try {
        const GrayImage img = load_image(f.string());
        separate_to_dir(img, stem, fs::path(out_dir) / stem, cfg.pipeline);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back(f.string() + ": " + e.what());
      }
    }
  };

  const int n = std::clamp<int>(cfg.workers, 1, static_cast<int>(files.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::printf("%zu image(s) processed, %zu failure(s)\n",
              files.size() - failures.size(), failures.size());
  for (const std::string& f : failures) std::fprintf(stderr, "%s\n", f.c_str());
  return failures.empty() ? 0 : 1;
}

int cmd_eval(const std::string& pred_dir, const std::string& truth_dir,
             const std::string& report, double iou_threshold) {
  std::vector<fs::path> truth_files;
  try {
    for (const auto& e : fs::directory_iterator(truth_dir)) {
      const std::string name = e.path().filename().string();
      if (e.is_regular_file() && name.size() > 11 &&
          name.substr(name.size() - 11) == ".truth.json")
        truth_files.push_back(e.path());
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  std::sort(truth_files.begin(), truth_files.end());
  if (truth_files.empty()) {
    std::fprintf(stderr, "no .truth.json files in %s\n", truth_dir.c_str());
    return 1;
  }

  ConfusionTally total;
  std::vector<std::string> failures;
  std::string csv = "image,bb,bt,tb,tt,accuracy\n";
  for (const fs::path& tf : truth_files) {
    const std::string name = tf.filename().string();
    const std::string stem = name.substr(0, name.size() - 11);
    try {
      const GroundTruth truth = read_truth(tf.string());
      const std::vector<PredictedRegion> preds = read_predictions(
          (fs::path(pred_dir) / stem / "components.json").string());
      const ConfusionTally tally = match_regions(preds, truth, iou_threshold);
      total += tally;
      char row[256];
      if (tally.total() > 0)
        std::snprintf(row, sizeof row, "%s,%lld,%lld,%lld,%lld,%.6f\n",
                      stem.c_str(), tally.bb, tally.bt, tally.tb, tally.tt,
                      accuracy(tally));
      else
        std::snprintf(row, sizeof row, "%s,0,0,0,0,nan\n", stem.c_str());
      csv += row;
    } catch (const std::exception& e) {
      failures.push_back(stem + ": " + e.what());
    }
  }

  if (total.total() > 0) {
    char row[256];
    std::snprintf(row, sizeof row, "TOTAL,%lld,%lld,%lld,%lld,%.6f\n", total.bb,
                  total.bt, total.tb, total.tt, accuracy(total));
    csv += row;
  }
  {
    std::ofstream out(report, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", report.c_str());
      return 1;
    }
    out << csv;
  }
  if (total.total() > 0)
    std::printf("accuracy %.6f\n", accuracy(total));
  else
    std::printf("accuracy n/a (no regions scored)\n");
  for (const std::string& f : failures) std::fprintf(stderr, "%s\n", f.c_str());
  return failures.empty() ? 0 : 1;
}

int cmd_synth(int count, unsigned seed_base, const std::string& out_dir) {
  try {
    fs::create_directories(out_dir);
    std::string manifest;
    for (int i = 0; i < count; ++i) {
      const std::uint32_t seed = seed_base + static_cast<unsigned>(i);
      char stem[32];
      std::snprintf(stem, sizeof stem, "card_%04u", seed);
      SynthCard card = generate_card(default_card_spec(seed));
      card.truth.image_id = stem;
      save_pgm(card.image, (fs::path(out_dir) / (std::string(stem) + ".pgm")).string());
      write_truth(card.truth,
                  (fs::path(out_dir) / (std::string(stem) + ".truth.json")).string());
      manifest += stem;
      manifest += "\n";
    }
    std::ofstream mf(fs::path(out_dir) / "manifest.txt",
                     std::ios::binary | std::ios::trunc);
    if (!mf) throw IoError("cannot write manifest.txt");
    mf << manifest;
    std::printf("%d card(s) written to %s\n", count, out_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "synth: %s\n", e.what());
    return 1;
  }
}

struct BenchResolution {
  const char* key;
  int w;
  int h;
};

constexpr BenchResolution kBenchResolutions[] = {
    {"0.3", 640, 480},  {"0.45", 800, 600},  {"0.75", 1024, 768},
    {"1", 1182, 886},   {"2", 1672, 1254},   {"3", 2048, 1536},
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

int cmd_bench(const std::string& resolutions, int runs,
              const std::string& report, const CliConfig& cfg) {
  if (runs < 1) {
    std::fprintf(stderr, "bench: --runs must be >= 1\n");
    return 2;
  }
  std::vector<BenchResolution> selected;
  std::string tok;
  std::istringstream ss(resolutions);
  while (std::getline(ss, tok, ',')) {
    const auto* it =
        std::find_if(std::begin(kBenchResolutions), std::end(kBenchResolutions),
                     [&](const BenchResolution& r) { return tok == r.key; });
    if (it == std::end(kBenchResolutions)) {
      std::fprintf(stderr,
                   "bench: unknown resolution '%s' (use 0.3,0.45,0.75,1,2,3)\n",
                   tok.c_str());
      return 2;
    }
    selected.push_back(*it);
  }
  if (selected.empty()) {
    std::fprintf(stderr, "bench: no resolutions selected\n");
    return 2;
  }

  std::string csv =
      "resolution,width,height,background_ms,regions_ms,classify_ms,skew_ms,"
      "binarize_ms,total_ms,skew_share\n";
  for (const BenchResolution& r : selected) {
    const SynthCard card = generate_card(default_card_spec(42, r.w, r.h));
    std::vector<StageTimings> ts;
    ts.reserve(runs);
    for (int i = 0; i < runs; ++i)
      ts.push_back(run_pipeline(card.image, cfg.pipeline).timings);
    auto field = [&](double StageTimings::*m) {
      std::vector<double> v;
      v.reserve(ts.size());
      for (const StageTimings& t : ts) v.push_back(t.*m);
      return median(std::move(v));
    };
    const double bg = field(&StageTimings::background_ms);
    const double rg = field(&StageTimings::regions_ms);
    const double cl = field(&StageTimings::classify_ms);
    const double sk = field(&StageTimings::skew_ms);
    const double bi = field(&StageTimings::binarize_ms);
    const double tot = field(&StageTimings::total_ms);
    const double share = tot > 0.0 ? sk / tot : 0.0;
    char row[256];
    std::snprintf(row, sizeof row, "%s,%d,%d,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.4f\n",
                  r.key, r.w, r.h, bg, rg, cl, sk, bi, tot, share);
    csv += row;
    std::printf("%-4s MP %5dx%-5d total %8.2f ms  skew %7.2f ms (%.1f%%)\n",
                r.key, r.w, r.h, tot, sk, 100.0 * share);
  }
  std::ofstream out(report, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", report.c_str());
    return 1;
  }
  out << csv;
  std::printf("report written to %s\n", report.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cardsep: text/graphics separation for business card images"};
  app.require_subcommand(1);

  CliConfig cfg;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARDSEP_CONFIG")) {
    try {
      apply_config_file(cfg, env);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "config: %s\n", e.what());
      return 2;
    }
  }

  std::string sep_in, sep_out;
  bool dump_blocks = false;
  CLI::App* sep = app.add_subcommand("separate", "process one image");
  sep->add_option("input", sep_in, "input image (P5 PGM or PNG)")->required();
  sep->add_option("-o,--out", sep_out, "output directory")->required();
  sep->add_flag("--dump-blocks", dump_blocks,
                "also write the block label grid as a PGM");
  add_pipeline_flags(sep, cfg);

  std::string batch_in, batch_out;
  CLI::App* bat = app.add_subcommand("batch", "process a directory of images");
  bat->add_option("input", batch_in, "input directory")->required();
  bat->add_option("-o,--out", batch_out, "output directory")->required();
  bat->add_option("--workers", cfg.workers, "concurrent images")
      ->capture_default_str();
  add_pipeline_flags(bat, cfg);

  std::string pred_dir, truth_dir, eval_out = "eval_report.csv";
  CLI::App* ev =
      app.add_subcommand("eval", "score predictions against ground truth");
  ev->add_option("predictions", pred_dir,
                 "directory holding per-image output directories")
      ->required();
  ev->add_option("truth", truth_dir, "directory of .truth.json files")
      ->required();
  ev->add_option("-o,--out", eval_out, "CSV report path")
      ->capture_default_str();
  ev->add_option("--iou", cfg.pipeline.iou_threshold, "IoU match threshold")
      ->capture_default_str();

  int synth_count = 10;
  unsigned seed_base = 1;
  std::string synth_out;
  CLI::App* sy =
      app.add_subcommand("synth", "generate synthetic annotated cards");
  sy->add_option("--count", synth_count, "number of cards")
      ->capture_default_str();
  sy->add_option("--seed-base", seed_base, "seed of the first card")
      ->capture_default_str();
  sy->add_option("-o,--out", synth_out, "output directory")->required();

  std::string bench_res = "0.3,0.45,0.75,1,2,3", bench_out = "report.csv";
  int bench_runs = 5;
  CLI::App* be =
      app.add_subcommand("bench", "time the pipeline across resolutions");
  be->add_option("--resolutions", bench_res,
                 "comma list from {0.3,0.45,0.75,1,2,3} megapixels")
      ->capture_default_str();
  be->add_option("--runs", bench_runs, "runs per resolution, median reported")
      ->capture_default_str();
  be->add_option("-o,--out", bench_out, "CSV report path")
      ->capture_default_str();
  add_pipeline_flags(be, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sep->parsed()) return cmd_separate(sep_in, sep_out, cfg, dump_blocks);
    if (bat->parsed()) return cmd_batch(batch_in, batch_out, cfg);
    if (ev->parsed())
      return cmd_eval(pred_dir, truth_dir, eval_out, cfg.pipeline.iou_threshold);
    if (sy->parsed()) return cmd_synth(synth_count, seed_base, synth_out);
    if (be->parsed()) return cmd_bench(bench_res, bench_runs, bench_out, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
