#pragma once

#include <cstdint>

#include "wmi/image.hpp"

namespace wmi {

enum class Conduction {
  exponential,  // g(x) = exp(-(x/kappa)^2)
  rational,     // g(x) = 1 / (1 + (x/kappa)^2)
};

struct DiffusionParams {
  int iterations = 15;
  double lambda = 1.0 / 7.0;
  double kappa = 3.0;
  Conduction conduction = Conduction::rational;
};

// Perona-Malik anisotropic diffusion with 4-neighbour gradients and reflecting
// borders. Runs in double precision; the result is rounded and clamped to
// [0,255] once at the end. Throws InvalidArgument unless 0 < lambda <= 1/4,
// kappa > 0 and iterations >= 0.
GrayImage perona_malik(const GrayImage& img, const DiffusionParams& params = {});

// Otsu threshold: the smallest t in [0,254] minimising the within-class
// variance of {g <= t} and {g > t}. Throws Undetectable on a constant image.
std::uint8_t otsu_threshold(const GrayImage& img);

struct PreprocessResult {
  GrayImage cleaned;           // background pixels forced to 255
  BinaryMask foreground;       // M_f
  BinaryMask background;       // M_b, the complement of M_f
  std::uint8_t otsu_threshold = 0;
};

// Otsu foreground (strictly above the threshold) with its holes filled. Pixels
// outside it are set to 255 in `cleaned`.
PreprocessResult segregate_background(const GrayImage& img);

}  // namespace wmi
