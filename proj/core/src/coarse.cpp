#include "wmi/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "wmi/image_ops.hpp"

namespace wmi {

BinaryMask annulus_contour(const DistanceMap& boundary_distance, const BinaryMask& ventricles,
                           const BinaryMask& foreground) {
  require_same_shape(boundary_distance, ventricles, "annulus_contour");
  require_same_shape(boundary_distance, foreground, "annulus_contour");
  BinaryMask out(foreground.width(), foreground.height(), 0);

  if (count_true(ventricles) == 0) {
    std::int32_t max_d = 0;
    for (std::size_t i = 0; i < foreground.size(); ++i) {
      if (foreground[i]) max_d = std::max(max_d, boundary_distance[i]);
    }
    const double half = max_d / 2.0;
    for (std::size_t i = 0; i < foreground.size(); ++i) {
      out[i] = (foreground[i] && std::abs(boundary_distance[i] - half) <= 1.0) ? 1 : 0;
    }
    return out;
  }

  const DistanceMap to_ventricle = distance_transform_l1_raw(ventricles);
  for (std::size_t i = 0; i < foreground.size(); ++i) {
    out[i] = (foreground[i] && std::abs(boundary_distance[i] - to_ventricle[i]) <= 1) ? 1 : 0;
  }
  return out;
}

BinaryMask wm_sample_mask(const BinaryMask& contour, const BinaryMask& ventricles,
                          const BinaryMask& foreground) {
  if (count_true(contour) == 0) throw Undetectable("wm_sample_mask: empty contour");
  return mask_and(mask_and_not(fill_holes(contour), ventricles), foreground);
}

namespace {

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double med = v[mid];
  if (v.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return med;
}

}  // namespace

WmStats wm_stats(const GrayImage& img, const BinaryMask& wm_mask) {
  require_same_shape(img, wm_mask, "wm_stats");
  std::vector<double> samples;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (wm_mask[i]) samples.push_back(img[i]);
  }
  if (samples.size() < 16) {
    throw Undetectable("wm_stats: only " + std::to_string(samples.size()) + " white matter samples");
  }
  WmStats s;
  s.sample_count = samples.size();
  s.median = median_inplace(samples);
  for (auto& v : samples) v = std::abs(v - s.median);
  s.mad = median_inplace(samples);
  return s;
}

BinaryMask hyperintensity_mask(const GrayImage& img, const WmStats& stats,
                               const BinaryMask& foreground, double z_threshold) {
  require_same_shape(img, foreground, "hyperintensity_mask");
  BinaryMask out(img.width(), img.height(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (!foreground[i]) continue;
    const double dev = img[i] - stats.median;
    if (stats.mad > 0.0) {
      out[i] = kModifiedZScale * dev / stats.mad > z_threshold ? 1 : 0;
    } else {
      out[i] = dev > 0.0 ? 1 : 0;
    }
  }
  return out;
}

std::vector<bool> two_means_small_cluster(const std::vector<int>& sizes) {
  std::vector<bool> small(sizes.size(), true);
  if (sizes.size() < 2) return small;
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  double c_small = *lo;
  double c_big = *hi;
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    double sum_s = 0.0, sum_b = 0.0;
    int n_s = 0, n_b = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const bool s = std::abs(sizes[i] - c_small) <= std::abs(sizes[i] - c_big);
      if (s != small[i]) changed = true;
      small[i] = s;
      if (s) {
        sum_s += sizes[i];
        ++n_s;
      } else {
        sum_b += sizes[i];
        ++n_b;
      }
    }
    if (n_s > 0) c_small = sum_s / n_s;
    if (n_b > 0) c_big = sum_b / n_b;
    if (!changed && iter > 0) break;
  }
  return small;
}

std::vector<CandidateObject> filter_candidates(const BinaryMask& candidate_mask,
                                               const UnitImage& boundary_distance,
                                               const FilterParams& params) {
  require_same_shape(candidate_mask, boundary_distance, "filter_candidates");
  const int w = candidate_mask.width();
  const int h = candidate_mask.height();
  const LabelMap labels = connected_components_8(candidate_mask);
  const std::vector<PixelSet> objects = labels.objects();

  std::vector<bool> keep(objects.size(), true);

  if (params.size_constraint && !objects.empty()) {
    std::vector<std::size_t> by_size(objects.size());
    std::iota(by_size.begin(), by_size.end(), std::size_t{0});
    std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
      return objects[a].size() > objects[b].size();
    });
    // ceil(fraction * count), guarded against 0.05 * 60 = 3.0000000000000004.
    const double raw = params.discard_fraction * static_cast<double>(objects.size());
    const auto discard = std::min(objects.size(), static_cast<std::size_t>(std::ceil(raw - 1e-9)));
    for (std::size_t k = 0; k < discard; ++k) keep[by_size[k]] = false;

    std::vector<std::size_t> rest;
    std::vector<int> sizes;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (!keep[i]) continue;
      rest.push_back(i);
      sizes.push_back(static_cast<int>(objects[i].size()));
    }
    const std::vector<bool> small = two_means_small_cluster(sizes);
    for (std::size_t k = 0; k < rest.size(); ++k) {
      if (!small[k]) keep[rest[k]] = false;
    }
  }

  std::vector<CandidateObject> out;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!keep[i]) continue;
    const PixelSet& px = objects[i];
    double dp = 0.0;
    for (PixelIndex p : px) dp += boundary_distance[static_cast<std::size_t>(p)];
    dp /= static_cast<double>(px.size());
    if (params.distance_constraint && dp < params.dist_min) continue;
    if (params.min_lesion_size > 0 && static_cast<int>(px.size()) < params.min_lesion_size) continue;
    out.push_back({px, static_cast<int>(px.size()), object_centroid(px, w, h), dp});
  }
  return out;
}

}  // namespace wmi
