#pragma once

#include <vector>

#include "wmi/image.hpp"

namespace wmi {

struct WmStats {
  double median = 0.0;  // M_d
  double mad = 0.0;     // M_a
  std::size_t sample_count = 0;
};

struct CandidateObject {
  PixelSet pixels;
  int size = 0;
  Point2 centroid;
  double mean_boundary_distance = 0.0;  // mean normalised D_p over the object
};

struct FilterParams {
  bool size_constraint = true;       // top-5% discard plus the two-means size split
  bool distance_constraint = true;   // drop objects hugging the brain boundary
  double discard_fraction = 0.05;
  double dist_min = 0.15;
  int min_lesion_size = 0;           // 0 disables; ablation only
};

struct CoarseResult {
  std::vector<CandidateObject> candidates;
  BinaryMask contour;
  BinaryMask wm_mask;         // M_w
  BinaryMask candidate_mask;  // M_c
  WmStats stats;
};

// Pixels of the brain where the raw distance to the background and the raw
// distance to the ventricles differ by at most one pixel. With no ventricle
// pixel the band sits at half the largest boundary distance instead.
BinaryMask annulus_contour(const DistanceMap& boundary_distance, const BinaryMask& ventricles,
                           const BinaryMask& foreground);

// Region enclosed by the contour, minus the ventricles, inside the brain.
// Throws Undetectable on an empty contour.
BinaryMask wm_sample_mask(const BinaryMask& contour, const BinaryMask& ventricles,
                          const BinaryMask& foreground);

// Median and median absolute deviation over the masked pixels. Throws
// Undetectable with fewer than 16 samples.
WmStats wm_stats(const GrayImage& img, const BinaryMask& wm_mask);

inline constexpr double kModifiedZScale = 0.6745;

// Brain pixels whose modified Z-score 0.6745 (g - M_d) / M_a exceeds
// z_threshold. With M_a = 0 the test reduces to g > M_d.
BinaryMask hyperintensity_mask(const GrayImage& img, const WmStats& stats,
                               const BinaryMask& foreground, double z_threshold = 0.0);

// Two-cluster 1-D k-means seeded with the smallest and largest value. Returns
// true for members of the cluster seeded at the smallest value. Ties go to
// that cluster.
std::vector<bool> two_means_small_cluster(const std::vector<int>& sizes);

// Label candidates and apply the size, distance and min-size filters.
std::vector<CandidateObject> filter_candidates(const BinaryMask& candidate_mask,
                                               const UnitImage& boundary_distance,
                                               const FilterParams& params);

}  // namespace wmi
