#include "wmi/image.hpp"

#include <algorithm>

namespace wmi {

std::vector<PixelSet> LabelMap::objects() const {
  std::vector<PixelSet> out(static_cast<std::size_t>(object_count));
  const auto px = labels.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] > 0) out[static_cast<std::size_t>(px[i] - 1)].push_back(static_cast<PixelIndex>(i));
  }
  return out;
}

std::size_t count_true(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.pixels().begin(), mask.pixels().end(), [](auto v) { return v != 0; }));
}

BinaryMask mask_not(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 0 : 1;
  return out;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_and");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] && b[i]) ? 1 : 0;
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_or");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] || b[i]) ? 1 : 0;
  return out;
}

BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_and_not");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] && !b[i]) ? 1 : 0;
  return out;
}

BinaryMask mask_from_pixels(int width, int height, std::span<const PixelIndex> pixels) {
  BinaryMask out(width, height);
  for (PixelIndex p : pixels) {
    if (p < 0 || static_cast<std::size_t>(p) >= out.size()) {
      throw InvalidArgument("pixel index out of range");
    }
    out[static_cast<std::size_t>(p)] = 1;
  }
  return out;
}

PixelSet mask_pixels(const BinaryMask& mask) {
  PixelSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<PixelIndex>(i));
  }
  return out;
}

}  // namespace wmi
