#pragma once

#include <span>
#include <vector>

#include "wmi/coarse.hpp"

namespace wmi {

struct FineParams {
  double d_threshold = 0.1;  // normalised centroid distance
  int n_adjacent = 1;

  void validate() const;
};

struct SliceDetection {
  int slice_index = 0;
  std::vector<CandidateObject> confirmed;
  std::vector<CandidateObject> rejected;
};

// A gap on `slice_index` bridged by confirmed candidates on both neighbours.
// Reported only; no pixels are synthesised.
struct RecoveredAnnotation {
  int slice_index = 0;
  Point2 centroid;
};

struct VolumeDetection {
  std::vector<SliceDetection> per_slice;
  std::vector<RecoveredAnnotation> recovered;
  bool cross_validated = true;  // false for a single-slice volume
};

// A candidate on slice n is confirmed iff a candidate on one of the slices
// n-k or n+k (1 <= k <= n_adjacent) has its centroid within d_threshold.
// Slices are indexed by their position in `coarse_per_slice`.
VolumeDetection fine_validate(std::span<const std::vector<CandidateObject>> coarse_per_slice,
                              const FineParams& params = {});

double centroid_distance(const Point2& a, const Point2& b);

}  // namespace wmi
