#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "wmi/mser.hpp"

using namespace wmi;

namespace {

std::set<std::vector<int>> as_set(const std::vector<ExtremalRegion>& regions) {
  std::set<std::vector<int>> out;
  for (const auto& r : regions) out.insert(std::vector<int>(r.pixels.begin(), r.pixels.end()));
  return out;
}

MserParams small_params(const GrayImage& img) {
  MserParams p;
  p.delta = 5;
  p.min_area = 2;
  p.max_area = static_cast<int>(img.size()) / 2;
  p.max_variation = 0.5;
  return p;
}

}  // namespace

TEST(Mser, DarkSquareOnWhite) {
  GrayImage img(16, 16, 255);
  for (int y = 5; y < 11; ++y) {
    for (int x = 4; x < 10; ++x) img(x, y) = 20;
  }
  const auto regions = detect_dark_regions(img, MserParams::defaults_for(16, 16));
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0].size, 36);
  EXPECT_EQ(regions[0].seed_level, 20);
  EXPECT_DOUBLE_EQ(regions[0].stability, 0.0);
}

TEST(Mser, ConstantImageHasNoRegions) {
  const GrayImage img(16, 16, 77);
  EXPECT_TRUE(detect_dark_regions(img, MserParams::defaults_for(16, 16)).empty());
}

TEST(Mser, ParamsValidate) {
  MserParams p = MserParams::defaults_for(16, 16);
  EXPECT_NO_THROW(p.validate(256));
  p.delta = 0;
  EXPECT_THROW(p.validate(256), InvalidArgument);
  p = MserParams::defaults_for(16, 16);
  p.max_area = 300;
  EXPECT_THROW(p.validate(256), InvalidArgument);
  p = MserParams::defaults_for(16, 16);
  p.min_area = p.max_area;
  EXPECT_THROW(p.validate(256), InvalidArgument);
}

TEST(Mser, DefaultsScaleWithSlice) {
  const MserParams p = MserParams::defaults_for(96, 112);
  EXPECT_EQ(p.min_area, 11);
  EXPECT_EQ(p.max_area, 2688);
}

TEST(Mser, MatchesThresholdSweepOracle) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    const GrayImage img = trial % 2 ? oracle::random_blobs(rng, 18, 18) : oracle::random_gray(rng, 14, 14, 6);
    const MserParams p = small_params(img);
    const auto got = as_set(detect_dark_regions(img, p));
    const auto ref = oracle::naive_mser(img, p.delta, p.min_area, p.max_area, p.max_variation);
    EXPECT_EQ(got, ref) << "trial " << trial;
  }
}

TEST(Mser, RegionsAreNestedOrDisjoint) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage img = oracle::random_blobs(rng, 24, 24);
    const auto regions = detect_dark_regions(img, small_params(img));
    for (std::size_t i = 0; i < regions.size(); ++i) {
      for (std::size_t j = i + 1; j < regions.size(); ++j) {
        const std::set<int> a(regions[i].pixels.begin(), regions[i].pixels.end());
        std::size_t shared = 0;
        for (int p : regions[j].pixels) shared += a.count(p);
        const bool disjoint = shared == 0;
        const bool nested = shared == std::min(regions[i].pixels.size(), regions[j].pixels.size());
        EXPECT_TRUE(disjoint || nested);
      }
    }
  }
}

TEST(Mser, InvariantUnderIntensityShift) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    GrayImage img = oracle::random_blobs(rng, 20, 20);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(v / 2);
    GrayImage shifted = img;
    for (auto& v : shifted.pixels()) v = static_cast<std::uint8_t>(v + 60);
    const MserParams p = small_params(img);
    EXPECT_EQ(as_set(detect_dark_regions(img, p)), as_set(detect_dark_regions(shifted, p)));
  }
}

TEST(Mser, OutputIsSortedAndSizesConsistent) {
  std::mt19937_64 rng(13);
  const GrayImage img = oracle::random_blobs(rng, 32, 32);
  const auto regions = detect_dark_regions(img, small_params(img));
  for (std::size_t i = 0; i < regions.size(); ++i) {
    EXPECT_EQ(regions[i].size, static_cast<int>(regions[i].pixels.size()));
    EXPECT_TRUE(std::is_sorted(regions[i].pixels.begin(), regions[i].pixels.end()));
    int top = 0;
    for (int p : regions[i].pixels) top = std::max(top, static_cast<int>(img[static_cast<std::size_t>(p)]));
    EXPECT_EQ(top, regions[i].seed_level);
    if (i > 0) EXPECT_LE(regions[i - 1].seed_level, regions[i].seed_level);
  }
}
