#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmi/error.hpp"

namespace wmi {

inline constexpr int kMinRasterSide = 8;

// Linear (row-major) pixel index.
using PixelIndex = std::int32_t;

// A set of pixels stored as ascending linear indices.
using PixelSet = std::vector<PixelIndex>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Row-major 2D raster. The tag keeps semantically different rasters with the
// same storage type (gray slices vs. binary masks) from mixing silently.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    check_shape(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_shape(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw InvalidArgument("raster data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  template <typename U, typename OtherTag>
  bool same_shape(const Raster<U, OtherTag>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static void check_shape(int width, int height) {
    if (width < kMinRasterSide || height < kMinRasterSide) {
      throw InvalidArgument("raster must be at least " + std::to_string(kMinRasterSide) +
                            "x" + std::to_string(kMinRasterSide) + ", got " +
                            std::to_string(width) + "x" + std::to_string(height));
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct GrayTag {};
struct UnitTag {};
struct RealTag {};
struct MaskTag {};
struct DistanceTag {};
struct LabelTag {};

// One 8-bit slice.
using GrayImage = Raster<std::uint8_t, GrayTag>;
// Real values in [0,1].
using UnitImage = Raster<double, UnitTag>;
// Unconstrained real values (intermediate products).
using RealImage = Raster<double, RealTag>;
// 0/1 per pixel.
using BinaryMask = Raster<std::uint8_t, MaskTag>;
// Raw integer city-block distances.
using DistanceMap = Raster<std::int32_t, DistanceTag>;

// Connected-component labels, 0 = background, objects dense in 1..object_count.
struct LabelMap {
  Raster<std::int32_t, LabelTag> labels;
  int object_count = 0;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }

  // Pixel sets of every object, index 0 holding label 1.
  std::vector<PixelSet> objects() const;
};

template <typename U, typename TagA, typename V, typename TagB>
void require_same_shape(const Raster<U, TagA>& a, const Raster<V, TagB>& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(what) + ": shape " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                        "x" + std::to_string(b.height()));
  }
}

// Small mask helpers used throughout the pipeline.
std::size_t count_true(const BinaryMask& mask);
BinaryMask mask_not(const BinaryMask& mask);
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_from_pixels(int width, int height, std::span<const PixelIndex> pixels);
PixelSet mask_pixels(const BinaryMask& mask);

}  // namespace wmi
