#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ideageo/error.hpp"
#include "ideageo/geography.hpp"
#include "oracles.hpp"

using namespace ideageo;

namespace {

ScoredDesign at(double x, double y, std::vector<double> scores, std::string id = "") {
  static int next = 0;
  if (id.empty()) id = "d" + std::to_string(next++);
  return make_scored_design(id, "p", 1, {x, y}, std::move(scores));
}

std::vector<ScoredDesign> random_designs(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> likert(1, 5);
  std::vector<ScoredDesign> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(at(u(rng), u(rng), {double(likert(rng)), double(likert(rng)), double(likert(rng))},
                     "r" + std::to_string(i)));
  }
  return out;
}

}  // namespace

TEST(ScoredDesign, MeanAndValidation) {
  const auto d = at(0, 0, {5, 4, 5, 5});
  EXPECT_DOUBLE_EQ(d.mean_score, 4.75);
  EXPECT_THROW(at(0, 0, {}), Error);
  EXPECT_THROW(at(0, 0, {6}), Error);
  EXPECT_THROW(at(0, 0, {0.5}), Error);
}

TEST(GridSpec, DefaultGridPadsTenPercent) {
  const std::vector<ScoredDesign> ds = {at(0, 0, {3}), at(10, 4, {3})};
  const auto g = default_grid(ds);
  EXPECT_DOUBLE_EQ(g.x_min, -1.0);
  EXPECT_DOUBLE_EQ(g.x_max, 11.0);
  EXPECT_DOUBLE_EQ(g.y_min, -0.4);
  EXPECT_DOUBLE_EQ(g.y_max, 4.4);
  EXPECT_EQ(g.nx, 100u);
  EXPECT_DOUBLE_EQ(default_bandwidth(g), 1.2);
  const auto c = g.cell_center(0, 0);
  EXPECT_DOUBLE_EQ(c.x, -1.0 + 0.06);
  EXPECT_DOUBLE_EQ(c.y, -0.4 + 0.024);
}

TEST(GridSpec, CollapsedAxesStayUsable) {
  const std::vector<ScoredDesign> line = {at(0, 1, {3}), at(4, 1, {3})};
  const auto g = default_grid(line, 10, 10);
  EXPECT_NO_THROW(g.validate());
  EXPECT_GT(g.y_max - g.y_min, 0.0);
  const std::vector<ScoredDesign> point = {at(2, 2, {3})};
  EXPECT_NO_THROW(default_grid(point).validate());
  EXPECT_THROW(default_grid({}), Error);
  GridSpec bad;
  bad.nx = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = GridSpec{1, 1, 0, 1, 5, 5};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Terrain, LoneDesignIsFlatAtItsScore) {
  const std::vector<ScoredDesign> ds = {at(0.5, 0.5, {4, 5})};
  const auto t = build_terrain(ds, GridSpec{0, 1, 0, 1, 8, 8}, {0.3, 0.0, 1});
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 8; ++c) EXPECT_DOUBLE_EQ(t.at(r, c), 4.5);
  }
}

TEST(Terrain, MatchesDirectKernelAverage) {
  const auto ds = random_designs(3, 25);
  const GridSpec grid{-2.5, 2.5, -2.5, 2.5, 20, 15};
  const auto t = build_terrain(ds, grid, {0.7, 0.0, 1});
  for (std::size_t r = 0; r < grid.ny; r += 3) {
    for (std::size_t c = 0; c < grid.nx; c += 3) {
      const auto p = grid.cell_center(r, c);
      double w = 0.0, s = 0.0;
      for (const auto& d : ds) {
        const double k = std::exp(-((p.x - d.point.x) * (p.x - d.point.x) +
                                    (p.y - d.point.y) * (p.y - d.point.y)) / (2 * 0.49));
        w += k;
        s += k * d.mean_score;
      }
      EXPECT_NEAR(t.at(r, c), s / w, 1e-12);
      EXPECT_NEAR(elevation_at(ds, p, 0.7, 0.0), s / w, 1e-12);
    }
  }
}

TEST(Terrain, ElevationsStayWithinScoreRange) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = random_designs(seed, 30);
    double lo = 5, hi = 1;
    for (const auto& d : ds) {
      lo = std::min(lo, d.mean_score);
      hi = std::max(hi, d.mean_score);
    }
    const auto t = build_terrain(ds);
    for (std::size_t i = 0; i < t.elevation.size(); ++i) {
      if (!t.mask[i]) continue;
      EXPECT_GE(t.elevation[i], lo);
      EXPECT_LE(t.elevation[i], hi);
    }
  }
}

TEST(Terrain, ThreadCountDoesNotChangeResult) {
  const auto ds = random_designs(4, 40);
  const auto grid = default_grid(ds, 37, 23);
  const auto one = build_terrain(ds, grid, {0.0, default_weight_floor, 1});
  const auto many = build_terrain(ds, grid, {0.0, default_weight_floor, 5});
  EXPECT_EQ(one.elevation.size(), many.elevation.size());
  for (std::size_t i = 0; i < one.elevation.size(); ++i) {
    if (std::isnan(one.elevation[i])) {
      EXPECT_TRUE(std::isnan(many.elevation[i]));
    } else {
      EXPECT_EQ(one.elevation[i], many.elevation[i]);
    }
  }
  EXPECT_EQ(one.mask, many.mask);
}

TEST(Terrain, FarCellsAreMaskedBelowWeightFloor) {
  const std::vector<ScoredDesign> ds = {at(0, 0, {5}), at(0.1, 0, {1})};
  const auto t = build_terrain(ds, GridSpec{0, 20, 0, 20, 20, 20}, {0.2, 1e-6, 1});
  EXPECT_TRUE(t.defined(0, 0));
  EXPECT_FALSE(t.defined(19, 19));
  EXPECT_TRUE(std::isnan(t.at(19, 19)));
  EXPECT_TRUE(std::isnan(elevation_at(ds, {20, 20}, 0.2)));
}

TEST(Terrain, RejectsBadOptions) {
  const std::vector<ScoredDesign> ds = {at(0, 0, {3})};
  const GridSpec g{0, 1, 0, 1, 4, 4};
  EXPECT_NO_THROW(build_terrain(ds, g, {-1.0, 0.0, 1}));  // non-positive selects the default
  EXPECT_THROW(build_terrain(ds, g, {std::numeric_limits<double>::infinity(), 0.0, 1}), Error);
  EXPECT_THROW(build_terrain(ds, g, {0.1, -1.0, 1}), Error);
  EXPECT_THROW(build_terrain({}, g), Error);
  EXPECT_THROW(elevation_at(ds, {0, 0}, 0.0), Error);
}

TEST(Peaks, TwoSeparatedMountains) {
  // Each summit is ringed by low designs, so the smoothed maxima sit on the summits.
  std::vector<ScoredDesign> ds;
  for (const auto& [cx, top] : {std::pair{0.0, 5.0}, std::pair{10.0, 4.0}}) {
    ds.push_back(at(cx, 0, {top}));
    for (const auto& [dx, dy] : {std::pair{2.0, 0.0}, {-2.0, 0.0}, {0.0, 2.0}, {0.0, -2.0}}) {
      ds.push_back(at(cx + dx, dy, {1}));
    }
  }
  const auto t = build_terrain(ds, GridSpec{-3, 13, -3, 3, 80, 30}, {1.0, 0.0, 1});
  const auto peaks = find_peaks(t);
  ASSERT_GE(peaks.size(), 2u);
  EXPECT_NEAR(peaks[0].location.x, 0.0, 0.2);
  EXPECT_NEAR(peaks[0].location.y, 0.0, 0.2);
  EXPECT_NEAR(peaks[1].location.x, 10.0, 0.2);
  EXPECT_GT(peaks[0].elevation, peaks[1].elevation);
  const auto top = terrain_argmax(t);
  EXPECT_EQ(top.row, peaks[0].row);
  EXPECT_EQ(top.col, peaks[0].col);
}

TEST(Peaks, PlateauReportedOnceAtFirstCell) {
  TerrainGrid t{GridSpec{0, 4, 0, 3, 4, 3}, {}, {}};
  t.elevation = {1, 1, 1, 1,
                 1, 3, 3, 1,
                 1, 1, 1, 2};
  t.mask.assign(12, true);
  const auto peaks = find_peaks(t);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_EQ(peaks[0].row, 1u);
  EXPECT_EQ(peaks[0].col, 1u);
  EXPECT_DOUBLE_EQ(peaks[0].elevation, 3.0);
}

TEST(Peaks, ArgmaxTieTakesRowMajorFirst) {
  TerrainGrid t{GridSpec{0, 3, 0, 2, 3, 2}, {2, 1, 4, 4, 0, 0}, std::vector<bool>(6, true)};
  const auto p = terrain_argmax(t);
  EXPECT_EQ(p.row, 0u);
  EXPECT_EQ(p.col, 2u);
  t.mask[2] = false;
  t.elevation[2] = masked_elevation;
  EXPECT_EQ(terrain_argmax(t).row, 1u);
  t.mask.assign(6, false);
  EXPECT_THROW(terrain_argmax(t), Error);
  EXPECT_THROW(find_peaks(t), Error);
}

TEST(BestDesign, HighestMeanLowestIdOnTies) {
  const std::vector<ScoredDesign> ds = {at(0, 0, {4}, "b"), at(0, 0, {5, 4}, "c"),
                                        at(0, 0, {4.5}, "a"), at(0, 0, {2}, "d")};
  EXPECT_EQ(best_design(ds).design_id, "a");
  EXPECT_THROW(best_design({}), Error);
}

TEST(GridFile, RoundTripsThroughText) {
  const auto ds = random_designs(5, 12);
  const auto t = build_terrain(ds, default_grid(ds, 13, 9), {0.3, 1e-3, 1});
  const auto back = parse_grid(format_grid(t));
  EXPECT_EQ(back.grid.nx, 13u);
  EXPECT_EQ(back.grid.ny, 9u);
  EXPECT_NEAR(back.grid.x_min, t.grid.x_min, 1e-8);
  EXPECT_EQ(back.mask, t.mask);
  for (std::size_t i = 0; i < t.elevation.size(); ++i) {
    if (t.mask[i]) EXPECT_NEAR(back.elevation[i], t.elevation[i], 1e-8 * std::abs(t.elevation[i]));
  }
  EXPECT_EQ(format_grid(back), format_grid(t));
}

TEST(GridFile, ParseErrors) {
  EXPECT_THROW(parse_grid(""), Error);
  EXPECT_THROW(parse_grid("0,1,0,1,2\n"), Error);
  EXPECT_THROW(parse_grid("0,1,0,1,2,2\n1,2\n"), Error);
  EXPECT_THROW(parse_grid("0,1,0,1,2,1\n1,x\n"), Error);
  EXPECT_THROW(parse_grid("0,1,0,1,2,1\n1,2,3\n"), Error);
  EXPECT_NO_THROW(parse_grid("0,1,0,1,2,1\n1,NA\n"));
}

TEST(Export, WritesGridAndImage) {
  oracle::TempDir dir("terrain");
  const auto ds = random_designs(6, 10);
  const auto t = build_terrain(ds, default_grid(ds, 10, 6));
  const auto files = export_terrain(t, ds, dir / "out");
  EXPECT_EQ(files.grid, dir / "out.csv");
  EXPECT_EQ(files.image, dir / "out.ppm");
  EXPECT_EQ(oracle::slurp(files.grid), format_grid(t));
  const auto ppm = oracle::slurp(files.image);
  const std::string header = "P6\n40 24\n255\n";
  ASSERT_EQ(ppm.substr(0, header.size()), header);
  EXPECT_EQ(ppm.size(), header.size() + 40u * 24u * 3u);
  const auto grid = read_grid(files.grid);
  EXPECT_EQ(grid.mask, t.mask);
  EXPECT_THROW(export_terrain(t, ds, dir / "missing" / "x"), Error);
  EXPECT_THROW(read_grid(dir / "nope.csv"), Error);
}
