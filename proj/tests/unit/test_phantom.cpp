#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wmi/fine.hpp"
#include "wmi/phantom.hpp"

using namespace wmi;

TEST(Phantom, DeterministicForSeed) {
  const auto cfg = PhantomConfig::with_random_lesions(12);
  const PhantomStack a = generate_phantom(cfg);
  const PhantomStack b = generate_phantom(cfg);
  EXPECT_EQ(a.slices, b.slices);
  const PhantomStack c = generate_phantom(PhantomConfig::with_random_lesions(13));
  EXPECT_NE(a.slices, c.slices);
}

TEST(Phantom, LesionSpansExactlyItsSlices) {
  PhantomConfig cfg;
  cfg.decoy_count = 0;
  cfg.lesions.push_back({{0.3, 0.4}, {0.0, 0.0}, 3.5, 4, 3, 50});
  const PhantomStack s = generate_phantom(cfg);
  for (int k = 0; k < cfg.slice_count; ++k) {
    const bool expect = k >= 4 && k <= 6;
    EXPECT_EQ(count_true(s.truth[static_cast<std::size_t>(k)].lesion) > 0, expect) << "slice " << k;
  }
  EXPECT_EQ(s.lesion_instances.size(), 3u);
}

TEST(Phantom, WhiteMatterMedianNearConfiguredLevel) {
  const PhantomConfig cfg = PhantomConfig::with_random_lesions(21);
  const PhantomStack s = generate_phantom(cfg);
  for (std::size_t k = 0; k < s.slices.size(); ++k) {
    std::vector<double> wm;
    for (std::size_t i = 0; i < s.slices[k].size(); ++i) {
      if (static_cast<Tissue>(s.truth[k].tissue[i]) == Tissue::white_matter) wm.push_back(s.slices[k][i]);
    }
    EXPECT_NEAR(oracle::sorted_median(wm), cfg.wm_level, 2.0);
  }
}

TEST(Phantom, VentriclesDarkLesionsBright) {
  const PhantomStack s = generate_phantom(PhantomConfig::with_random_lesions(22, 3, 5));
  for (std::size_t k = 0; k < s.slices.size(); ++k) {
    std::vector<double> wm;
    for (std::size_t i = 0; i < s.slices[k].size(); ++i) {
      if (static_cast<Tissue>(s.truth[k].tissue[i]) == Tissue::white_matter) wm.push_back(s.slices[k][i]);
    }
    const double median = oracle::sorted_median(wm);
    for (std::size_t i = 0; i < s.slices[k].size(); ++i) {
      if (s.truth[k].ventricle[i]) ASSERT_LT(s.slices[k][i], median);
      if (s.truth[k].lesion[i]) ASSERT_GT(s.slices[k][i], median);
    }
  }
}

TEST(Phantom, TruthMasksNest) {
  const PhantomStack s = generate_phantom(PhantomConfig::with_random_lesions(23));
  for (const auto& t : s.truth) {
    EXPECT_EQ(count_true(mask_and_not(t.lesion, t.brain)), 0u);
    EXPECT_EQ(count_true(mask_and_not(t.ventricle, t.brain)), 0u);
    EXPECT_EQ(count_true(mask_and(t.lesion, t.ventricle)), 0u);
    EXPECT_EQ(count_true(mask_and(t.lesion, t.decoy)), 0u);
  }
}

TEST(Phantom, DecoysAreIsolatedAcrossSlices) {
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    const PhantomStack s = generate_phantom(PhantomConfig::with_random_lesions(seed, 3, 8));
    for (const auto& d : s.decoys) {
      for (const auto& o : s.decoys) {
        if (std::abs(o.slice - d.slice) == 1) EXPECT_GT(centroid_distance(o.centroid, d.centroid), 0.1);
      }
      for (const auto& o : s.lesion_instances) {
        if (std::abs(o.slice - d.slice) == 1) EXPECT_GT(centroid_distance(o.centroid, d.centroid), 0.1);
      }
    }
  }
}

TEST(Phantom, LobedVentriclesRender) {
  PhantomConfig base;
  base.ventricle_shape = VentricleShape::lobed;
  const PhantomStack s = generate_phantom(PhantomConfig::with_random_lesions(base, 5, 3, 5, 12));
  EXPECT_GT(count_true(s.truth[0].ventricle), 0u);
}

TEST(Phantom, InfeasibleGeometryThrows) {
  PhantomConfig outside;
  outside.lesions.push_back({{0.02, 0.5}, {0.0, 0.0}, 3.5, 0, 3, 50});
  EXPECT_THROW(generate_phantom(outside), InvalidArgument);

  PhantomConfig faint;
  faint.lesions.push_back({{0.5, 0.3}, {0.0, 0.0}, 3.5, 0, 3, 2});
  EXPECT_THROW(generate_phantom(faint), InvalidArgument);

  PhantomConfig late;
  late.lesions.push_back({{0.5, 0.3}, {0.0, 0.0}, 3.5, 11, 3, 50});
  EXPECT_THROW(generate_phantom(late), InvalidArgument);
}

TEST(Phantom, DenseVolumeGenerates) {
  // Many lesions per slice: rims of neighbouring lesions may overlap.
  const PhantomStack s = generate_phantom(PhantomConfig::with_random_lesions(7, 48, 64, 192));
  EXPECT_EQ(s.slices.size(), 192u);
  EXPECT_EQ(s.lesion_instances.size(), 48u * 3u);
  EXPECT_EQ(s.decoys.size(), 64u);
}
