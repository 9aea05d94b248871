#include <catch2/catch_amalgamated.hpp>

#include <initializer_list>

#include "cardsep/regions.hpp"

using namespace cardsep;

namespace {

BlockGrid make_grid(int cols, int rows, int bs,
                    std::initializer_list<BlockCoord> fg, int img_w = -1,
                    int img_h = -1) {
  BlockGrid g;
  g.cols = cols;
  g.rows = rows;
  g.block_size = bs;
  g.image_w = img_w < 0 ? cols * bs : img_w;
  g.image_h = img_h < 0 ? rows * bs : img_h;
  g.labels.assign(static_cast<std::size_t>(cols) * rows,
                  BlockLabel::Background);
  for (const BlockCoord& b : fg)
    g.labels[static_cast<std::size_t>(b.by) * cols + b.bx] =
        BlockLabel::Foreground;
  return g;
}

}  // namespace

TEST_CASE("grow_regions basics") {
  SECTION("empty grid yields no components") {
    CHECK(grow_regions(make_grid(3, 3, 8, {})).empty());
  }

  SECTION("isolated blocks become separate components") {
    const auto comps = grow_regions(make_grid(3, 3, 8, {{0, 0}, {2, 2}}));
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].id == 0);
    CHECK(comps[0].bbox == Rect{0, 0, 8, 8});
    CHECK(comps[1].id == 1);
    CHECK(comps[1].bbox == Rect{16, 16, 8, 8});
  }

  SECTION("diagonal neighbors do not merge") {
    const auto comps = grow_regions(make_grid(2, 2, 8, {{0, 0}, {1, 1}}));
    CHECK(comps.size() == 2);
  }

  SECTION("4-neighbors merge into an L component") {
    const auto comps =
        grow_regions(make_grid(3, 3, 8, {{0, 0}, {1, 0}, {1, 1}}));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].blocks.size() == 3);
    CHECK(comps[0].bbox == Rect{0, 0, 16, 16});
    CHECK(comps[0].width == 16);
    CHECK(comps[0].height == 16);
  }

  SECTION("ids follow raster encounter order") {
    const auto comps = grow_regions(make_grid(3, 2, 8, {{2, 0}, {0, 1}}));
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].blocks.front() == BlockCoord{2, 0});
    CHECK(comps[1].blocks.front() == BlockCoord{0, 1});
  }

  SECTION("ragged edge blocks clip the bbox") {
    const auto comps = grow_regions(make_grid(3, 1, 8, {{2, 0}}, 20, 6));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].bbox == Rect{16, 0, 4, 6});
  }
}

TEST_CASE("dark run counting") {
  using detail::count_dark_runs;
  CHECK(count_dark_runs({}) == 0);
  CHECK(count_dark_runs({0, 0, 0}) == 0);
  CHECK(count_dark_runs({1, 1, 1}) == 1);
  CHECK(count_dark_runs({1, 0, 1}) == 2);
  CHECK(count_dark_runs({0, 1, 1, 0, 1, 0}) == 2);
  CHECK(count_dark_runs({1}) == 1);
}

TEST_CASE("features of a zero-contrast solid component") {
  const GrayImage img(8, 8, 10);
  const auto comps = grow_regions(make_grid(1, 1, 8, {{0, 0}}));
  REQUIRE(comps.size() == 1);
  const Features f = compute_features(comps[0], img);
  CHECK(f.width == 8);
  CHECK(f.height == 8);
  CHECK(f.r_wh == 1.0);
  CHECK(f.gray_density == 1.0);
  CHECK(f.black_density == 1.0);
  CHECK(f.ra_cc == 100.0);
  CHECK(f.h_segments == 1);
  CHECK(f.middle_row_cuts == 2);
  CHECK(f.v_segments == 1);
}

TEST_CASE("features of a half-dark component") {
  GrayImage img(8, 8, 200);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 4; ++x) img.set(x, y, 0);
  const auto comps = grow_regions(make_grid(1, 1, 8, {{0, 0}}));
  const Features f = compute_features(comps[0], img);
  CHECK(f.gray_density == 1.0);
  CHECK(f.black_density == 0.5);  // threshold (0+200)/2, strict less-than
  CHECK(f.ra_cc == 50.0);
  CHECK(f.h_segments == 1);       // middle row: one dark run on the left
  CHECK(f.middle_row_cuts == 2);
  CHECK(f.v_segments == 0);       // middle column x=4 is all bright
}

TEST_CASE("segment counts see alternating bars") {
  GrayImage img(8, 8, 200);
  for (int x = 0; x < 8; ++x) {
    img.set(x, 1, 0);
    img.set(x, 2, 0);
    img.set(x, 5, 0);
    img.set(x, 6, 0);
  }
  const auto comps = grow_regions(make_grid(1, 1, 8, {{0, 0}}));
  const Features f = compute_features(comps[0], img);
  CHECK(f.v_segments == 2);  // middle column crosses both bars
  CHECK(f.h_segments == 0);  // middle row y=4 is background
  CHECK(f.middle_row_cuts == 0);
  CHECK(f.black_density == 0.5);
}

TEST_CASE("component mask excludes uncovered blocks") {
  // L-shaped component; block (1,0) is background despite its dark pixels.
  GrayImage img(16, 16, 200);
  for (int y = 0; y < 8; ++y)
    for (int x = 8; x < 16; ++x) img.set(x, y, 0);  // ink outside the mask
  for (int x = 0; x < 8; ++x) img.set(x, 2, 0);     // stripe inside block (0,0)
  const auto comps =
      grow_regions(make_grid(2, 2, 8, {{0, 0}, {0, 1}, {1, 1}}));
  REQUIRE(comps.size() == 1);
  const Features f = compute_features(comps[0], img);
  CHECK(f.gray_density == 0.75);           // 3 of 4 blocks covered
  CHECK(f.black_density == 8.0 / 256.0);   // only the stripe counts
  CHECK(f.h_segments == 0);                // middle row y=8 is bright
  CHECK(f.v_segments == 0);                // middle column x=8: uncovered then bright
}

TEST_CASE("feature extraction contract errors") {
  const GrayImage img(16, 16, 200);
  Component c;
  c.id = 0;
  CHECK_THROWS_AS(compute_features(c, img), std::invalid_argument);

  c.blocks = {{0, 0}};
  c.bbox = Rect{8, 8, 16, 16};  // spills past the image
  c.width = 16;
  c.height = 16;
  CHECK_THROWS_AS(compute_features(c, img), std::invalid_argument);
}

TEST_CASE("dark rule uses the component intensity midpoint") {
  GrayImage img(8, 8, 180);
  img.set(3, 3, 60);
  const auto comps = grow_regions(make_grid(1, 1, 8, {{0, 0}}));
  const detail::ComponentMask mask(comps[0]);
  const detail::DarkRule rule =
      detail::component_dark_rule(comps[0], img, mask);
  CHECK(rule.threshold == 120);  // (60 + 180) / 2
  CHECK_FALSE(rule.solid);
  CHECK(rule(119));
  CHECK_FALSE(rule(120));
}
