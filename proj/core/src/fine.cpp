#include "wmi/fine.hpp"

#include <cmath>

namespace wmi {

void FineParams::validate() const {
  if (!(d_threshold > 0.0)) throw InvalidArgument("fine: d_threshold must be positive");
  if (n_adjacent < 1) throw InvalidArgument("fine: n_adjacent must be >= 1");
}

double centroid_distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

bool has_match(const CandidateObject& c, const std::vector<CandidateObject>& others, double th) {
  for (const auto& o : others) {
    if (centroid_distance(c.centroid, o.centroid) <= th) return true;
  }
  return false;
}

}  // namespace

VolumeDetection fine_validate(std::span<const std::vector<CandidateObject>> coarse_per_slice,
                              const FineParams& params) {
  params.validate();
  VolumeDetection out;
  const int n = static_cast<int>(coarse_per_slice.size());
  out.per_slice.resize(coarse_per_slice.size());

  if (n == 1) {
    out.cross_validated = false;
    out.per_slice[0] = {0, coarse_per_slice[0], {}};
    return out;
  }

  for (int s = 0; s < n; ++s) {
    SliceDetection& det = out.per_slice[static_cast<std::size_t>(s)];
    det.slice_index = s;
    for (const auto& cand : coarse_per_slice[static_cast<std::size_t>(s)]) {
      bool ok = false;
      for (int k = 1; k <= params.n_adjacent && !ok; ++k) {
        if (s - k >= 0 && has_match(cand, coarse_per_slice[static_cast<std::size_t>(s - k)], params.d_threshold)) ok = true;
        if (s + k < n && has_match(cand, coarse_per_slice[static_cast<std::size_t>(s + k)], params.d_threshold)) ok = true;
      }
      (ok ? det.confirmed : det.rejected).push_back(cand);
    }
  }

  // Confirmed detections on both sides of a slice with nothing confirmed
  // nearby get an interpolated annotation on that slice.
  for (int s = 1; s + 1 < n; ++s) {
    const auto& below = out.per_slice[static_cast<std::size_t>(s - 1)].confirmed;
    const auto& above = out.per_slice[static_cast<std::size_t>(s + 1)].confirmed;
    const auto& here = out.per_slice[static_cast<std::size_t>(s)].confirmed;
    for (const auto& a : below) {
      for (const auto& b : above) {
        if (centroid_distance(a.centroid, b.centroid) > params.d_threshold) continue;
        const Point2 mid{(a.centroid.x + b.centroid.x) / 2.0, (a.centroid.y + b.centroid.y) / 2.0};
        bool covered = false;
        for (const auto& c : here) covered = covered || centroid_distance(c.centroid, mid) <= params.d_threshold;
        for (const auto& r : out.recovered) {
          covered = covered || (r.slice_index == s && centroid_distance(r.centroid, mid) <= params.d_threshold);
        }
        if (!covered) out.recovered.push_back({s, mid});
      }
    }
  }
  return out;
}

}  // namespace wmi
