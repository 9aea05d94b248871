#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "cardsep/binarize.hpp"

using namespace cardsep;

namespace {

// Phase 1 only: strict mid-intensity threshold, no neighborhood pass.
std::vector<std::uint8_t> phase1_mask(const GrayImage& crop) {
  const auto [lo, hi] = crop.min_max();
  const int threshold = (lo + hi) / 2;
  std::vector<std::uint8_t> m(crop.pixel_count(), 0);
  for (int y = 0; y < crop.height(); ++y)
    for (int x = 0; x < crop.width(); ++x)
      m[static_cast<std::size_t>(y) * crop.width() + x] =
          crop.at(x, y) < threshold;
  return m;
}

}  // namespace

TEST_CASE("strict threshold keeps midpoint pixels as background") {
  // min 0, max 255: threshold 127. An isolated pair cannot trigger phase 2.
  GrayImage crop(2, 1);
  crop.set(0, 0, 0);
  crop.set(1, 0, 255);
  const BinaryRegion b = binarize_region(crop);
  CHECK(b.at(0, 0));
  CHECK_FALSE(b.at(1, 0));

  GrayImage edge(3, 1);
  edge.set(0, 0, 0);
  edge.set(1, 0, 127);  // == threshold, strictly-less keeps it background
  edge.set(2, 0, 255);
  const BinaryRegion e = binarize_region(edge);
  CHECK(e.foreground_count() == 1);

  GrayImage below(3, 1);
  below.set(0, 0, 0);
  below.set(1, 0, 126);
  below.set(2, 0, 255);
  CHECK(binarize_region(below).foreground_count() == 2);
}

TEST_CASE("uniform crops produce no ink") {
  const GrayImage crop(6, 4, 77);
  CHECK(binarize_region(crop).foreground_count() == 0);
}

TEST_CASE("a fully surrounded hole is filled") {
  GrayImage crop(3, 3, 0);
  crop.set(1, 1, 255);
  const BinaryRegion b = binarize_region(crop);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) CHECK(b.at(x, y));
}

TEST_CASE("promotion needs at least five neighbors") {
  // Five dark neighbors around the center: top row plus both middle sides.
  GrayImage five(3, 3, 255);
  five.set(0, 0, 0);
  five.set(1, 0, 0);
  five.set(2, 0, 0);
  five.set(0, 1, 0);
  five.set(2, 1, 0);
  const BinaryRegion b5 = binarize_region(five);
  CHECK(b5.at(1, 1));
  CHECK(b5.foreground_count() == 6);
  CHECK_FALSE(b5.at(0, 2));
  CHECK_FALSE(b5.at(1, 2));
  CHECK_FALSE(b5.at(2, 2));

  // Only four: the center stays background.
  GrayImage four(3, 3, 255);
  four.set(0, 0, 0);
  four.set(1, 0, 0);
  four.set(2, 0, 0);
  four.set(0, 1, 0);
  const BinaryRegion b4 = binarize_region(four);
  CHECK_FALSE(b4.at(1, 1));
  CHECK(b4.foreground_count() == 4);
}

TEST_CASE("promotions made earlier in the pass count for later pixels") {
  // P1=(1,1) has five phase-1 neighbors. P2=(2,1) has only four, and crosses
  // the bar only because P1 was already promoted when the scan reaches it.
  GrayImage crop(4, 3, 255);
  crop.set(0, 0, 0);
  crop.set(1, 0, 0);
  crop.set(2, 0, 0);
  crop.set(0, 1, 0);
  crop.set(0, 2, 0);
  crop.set(3, 0, 0);
  crop.set(2, 2, 0);
  const BinaryRegion b = binarize_region(crop);
  CHECK(b.at(1, 1));
  CHECK(b.at(2, 1));

  // A frozen-snapshot pass would leave P2 unpromoted; verify the premise.
  const std::vector<std::uint8_t> p1 = phase1_mask(crop);
  auto fg_in_snapshot = [&](int x, int y) {
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= 4 || ny < 0 || ny >= 3) continue;
        n += p1[static_cast<std::size_t>(ny) * 4 + nx];
      }
    return n;
  };
  CHECK(fg_in_snapshot(1, 1) >= 5);
  CHECK(fg_in_snapshot(2, 1) == 4);
}

TEST_CASE("phase 2 never demotes phase-1 ink") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    GrayImage crop(16, 16);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x)
        crop.set(x, y, static_cast<std::uint8_t>(rng() % 256));
    const std::vector<std::uint8_t> p1 = phase1_mask(crop);
    const BinaryRegion b = binarize_region(crop);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x)
        if (p1[static_cast<std::size_t>(y) * 16 + x]) CHECK(b.at(x, y));
  }
}

TEST_CASE("binary image rendering and PGM output") {
  GrayImage crop(2, 2);
  crop.set(0, 0, 0);
  crop.set(1, 0, 255);
  crop.set(0, 1, 255);
  crop.set(1, 1, 255);
  const BinaryRegion b = binarize_region(crop);
  const GrayImage img = binary_to_image(b);
  CHECK(img.at(0, 0) == 0);
  CHECK(img.at(1, 0) == 255);
  CHECK(img.at(0, 1) == 255);
  CHECK(img.at(1, 1) == 255);

  std::filesystem::create_directories("binarize_tmp");
  save_binary_pgm(b, "binarize_tmp/out.pgm");
  std::ifstream in("binarize_tmp/out.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  CHECK(bytes == std::string("P5\n2 2\n255\n\x00\xff\xff\xff", 15));
}
