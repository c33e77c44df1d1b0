#pragma once

#include <cstdint>
#include <vector>

#include "wmi/image.hpp"

namespace wmi {

struct MserParams {
  int delta = 5;
  int min_area = 1;
  int max_area = 1;
  double max_variation = 0.5;

  // Defaults scaled to a slice: min area 0.1% and max area 25% of the pixels.
  static MserParams defaults_for(int width, int height);

  // Throws InvalidArgument unless delta >= 1 and 0 < min_area < max_area <= pixel_count.
  void validate(std::size_t pixel_count) const;
};

struct ExtremalRegion {
  PixelSet pixels;          // ascending linear indices
  int size = 0;
  double stability = 0.0;   // relative area variation at the selected level
  int seed_level = 0;       // lowest threshold at which this pixel set exists
};

// Dark maximally stable extremal regions: 4-connected components of the
// sublevel sets {I <= t} (the bright extremal sets of the inverted image).
//
// Every distinct component N lives on a level range [lo, hi]. At level i the
// relative variation is
//
//   q(i) = (|R(i + delta)| - |R(i - delta)|) / |N|
//
// where R(i + delta) is the enclosing component at that level (the whole image
// past the top level) and R(i - delta) follows the branch of largest children
// (ties to the child holding the smaller pixel index), or is empty. Below lo
// the branch continues into the largest child, above hi into the parent. N is
// returned when its area lies in [min_area, max_area] and some level in
// [lo, hi] is a local minimum of q (non-strict on both sides) with
// q <= max_variation.
//
// Built with the linear-time component-stack flood fill. Results are ordered
// by seed level, then size, then smallest pixel index.
std::vector<ExtremalRegion> detect_dark_regions(const GrayImage& img, const MserParams& params);

}  // namespace wmi
