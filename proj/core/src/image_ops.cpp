#include "wmi/image_ops.hpp"

#include <algorithm>
#include <limits>

namespace wmi {

namespace {

template <typename Src>
UnitImage rescale(const Src& img) {
  if (img.empty()) throw InvalidArgument("normalize_to_unit: empty image");
  const auto [lo_it, hi_it] = std::minmax_element(img.pixels().begin(), img.pixels().end());
  const double lo = static_cast<double>(*lo_it);
  const double hi = static_cast<double>(*hi_it);
  UnitImage out(img.width(), img.height(), 0.0);
  if (hi == lo) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = (static_cast<double>(img[i]) - lo) / range;
  }
  return out;
}

}  // namespace

UnitImage normalize_to_unit(const RealImage& img) { return rescale(img); }
UnitImage normalize_to_unit(const GrayImage& img) { return rescale(img); }
UnitImage normalize_to_unit(const DistanceMap& img) { return rescale(img); }

RealImage to_real(const GrayImage& img) {
  RealImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i];
  return out;
}

GrayImage complement(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = static_cast<std::uint8_t>(255 - img[i]);
  return out;
}

UnitImage hadamard(const UnitImage& a, const UnitImage& b) {
  require_same_shape(a, b, "hadamard");
  RealImage prod(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return normalize_to_unit(prod);
}

DistanceMap distance_transform_l1_raw(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  if (count_true(mask) == 0) {
    throw InvalidArgument("distance_transform_l1: mask has no true pixel");
  }
  // Any path length is below w + h, so this never overflows when incremented.
  const std::int32_t far = w + h;
  DistanceMap d(w, h, far);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) d[i] = 0;
  }
  // Two raster sweeps are exact for the city-block metric.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto& v = d(x, y);
      if (x > 0) v = std::min(v, d(x - 1, y) + 1);
      if (y > 0) v = std::min(v, d(x, y - 1) + 1);
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      auto& v = d(x, y);
      if (x + 1 < w) v = std::min(v, d(x + 1, y) + 1);
      if (y + 1 < h) v = std::min(v, d(x, y + 1) + 1);
    }
  }
  return d;
}

UnitImage distance_transform_l1(const BinaryMask& mask) {
  return normalize_to_unit(distance_transform_l1_raw(mask));
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  // Flood the false pixels reachable from the border; everything else is filled.
  BinaryMask outside(w, h, 0);
  std::vector<PixelIndex> stack;
  auto seed = [&](int x, int y) {
    const auto i = mask.index(x, y);
    if (!mask[i] && !outside[i]) {
      outside[i] = 1;
      stack.push_back(static_cast<PixelIndex>(i));
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!stack.empty()) {
    const PixelIndex p = stack.back();
    stack.pop_back();
    const int x = p % w;
    const int y = p / w;
    if (x > 0) seed(x - 1, y);
    if (x + 1 < w) seed(x + 1, y);
    if (y > 0) seed(x, y - 1);
    if (y + 1 < h) seed(x, y + 1);
  }
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = outside[i] ? 0 : 1;
  return out;
}

namespace {

struct Run {
  int row;
  int start;  // inclusive
  int end;    // inclusive
  int label;  // provisional
};

int find_root(std::vector<int>& parent, int a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b) {
    parent[b] = a;
  } else {
    parent[a] = b;
  }
}

}  // namespace

LabelMap connected_components_8(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();

  // 1. Run-length encode.
  std::vector<Run> runs;
  std::vector<std::size_t> row_begin(static_cast<std::size_t>(h) + 1, 0);
  for (int y = 0; y < h; ++y) {
    row_begin[static_cast<std::size_t>(y)] = runs.size();
    int x = 0;
    while (x < w) {
      if (!mask(x, y)) {
        ++x;
        continue;
      }
      const int start = x;
      while (x < w && mask(x, y)) ++x;
      runs.push_back({y, start, x - 1, -1});
    }
  }
  row_begin[static_cast<std::size_t>(h)] = runs.size();

  // 2. Provisional labels plus equivalences against the previous row.
  std::vector<int> parent;
  for (int y = 0; y < h; ++y) {
    const std::size_t cur_lo = row_begin[static_cast<std::size_t>(y)];
    const std::size_t cur_hi = row_begin[static_cast<std::size_t>(y) + 1];
    std::size_t prev_lo = y > 0 ? row_begin[static_cast<std::size_t>(y) - 1] : cur_lo;
    const std::size_t prev_hi = cur_lo;
    for (std::size_t r = cur_lo; r < cur_hi; ++r) {
      Run& run = runs[r];
      // Runs in the previous row that end before this one can touch no later run.
      while (prev_lo < prev_hi && runs[prev_lo].end < run.start - 1) ++prev_lo;
      for (std::size_t p = prev_lo; p < prev_hi && runs[p].start <= run.end + 1; ++p) {
        if (run.label < 0) {
          run.label = runs[p].label;
        } else {
          unite(parent, run.label, runs[p].label);
        }
      }
      if (run.label < 0) {
        run.label = static_cast<int>(parent.size());
        parent.push_back(run.label);
      }
    }
  }

  // 3. Resolve classes into dense final labels in raster order.
  std::vector<int> final_label(parent.size(), 0);
  int next = 0;
  for (const Run& run : runs) {
    const int root = find_root(parent, run.label);
    if (final_label[static_cast<std::size_t>(root)] == 0) final_label[static_cast<std::size_t>(root)] = ++next;
  }

  // 4. Relabel.
  LabelMap out{Raster<std::int32_t, LabelTag>(w, h, 0), next};
  for (const Run& run : runs) {
    const int label = final_label[static_cast<std::size_t>(find_root(parent, run.label))];
    for (int x = run.start; x <= run.end; ++x) out.labels(x, run.row) = label;
  }
  return out;
}

Point2 object_centroid(std::span<const PixelIndex> pixels, int width, int height) {
  if (pixels.empty()) throw InvalidArgument("object_centroid: empty pixel set");
  if (width < 2 || height < 2) throw InvalidArgument("object_centroid: degenerate extent");
  double sx = 0.0;
  double sy = 0.0;
  for (PixelIndex p : pixels) {
    sx += p % width;
    sy += p / width;
  }
  const double n = static_cast<double>(pixels.size());
  return {sx / n / (width - 1), sy / n / (height - 1)};
}

}  // namespace wmi
