#pragma once

#include <span>

#include "wmi/image.hpp"

namespace wmi {

// Min-max rescale to [0,1]. A constant image maps to all zeros.
UnitImage normalize_to_unit(const RealImage& img);
UnitImage normalize_to_unit(const GrayImage& img);
UnitImage normalize_to_unit(const DistanceMap& img);

RealImage to_real(const GrayImage& img);

// 255 - value, per pixel.
GrayImage complement(const GrayImage& img);

// Elementwise product of two unit images, rescaled back to [0,1].
UnitImage hadamard(const UnitImage& a, const UnitImage& b);

// City-block distance from every pixel to the nearest true pixel of `mask`.
// Throws InvalidArgument when the mask has no true pixel.
DistanceMap distance_transform_l1_raw(const BinaryMask& mask);

// Same distances, rescaled to [0,1].
UnitImage distance_transform_l1(const BinaryMask& mask);

// Flip every false region that is not 4-connected to the border.
BinaryMask fill_holes(const BinaryMask& mask);

// 8-connected labeling by run-length encoding with an equivalence table.
// Labels are assigned in raster order of each object's first pixel.
LabelMap connected_components_8(const BinaryMask& mask);

// Mean pixel coordinate scaled by (width-1, height-1) into [0,1]^2.
Point2 object_centroid(std::span<const PixelIndex> pixels, int width, int height);

}  // namespace wmi
