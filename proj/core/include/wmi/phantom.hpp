#pragma once

#include <cstdint>
#include <vector>

#include "wmi/image.hpp"

namespace wmi {

enum class VentricleShape { simple, lobed };

struct LesionSpec {
  Point2 center;          // normalised centre on the first slice
  Point2 drift;           // normalised centre shift per slice
  double radius = 3.5;    // pixels
  int first_slice = 0;
  int span_slices = 3;
  int intensity_boost = 50;
};

struct PhantomConfig {
  int width = 96;
  int height = 112;
  int slice_count = 12;
  std::uint64_t rng_seed = 1;

  double noise_sigma = 1.0;              // tissue noise
  double background_noise_sigma = 8.0;   // air noise outside the head

  int background_level = 20;
  int skull_level = 210;
  int csf_level = 30;
  int cortex_level = 145;
  int wm_level = 100;
  int ventricle_level = 40;

  bool skull = true;
  VentricleShape ventricle_shape = VentricleShape::simple;
  int cortex_arcs = 4;
  int juxtacortical_spots = 4;  // small bright spots in the cortical gaps, on every slice
  int decoy_count = 5;          // single-slice hyperintense blobs
  double decoy_radius = 3.2;
  int decoy_boost = 50;
  double decoy_separation = 0.15;  // normalised distance kept from anything on adjacent slices

  std::vector<LesionSpec> lesions;

  // Default geometry with `lesion_count` randomly placed multi-slice lesions.
  static PhantomConfig with_random_lesions(std::uint64_t seed, int lesion_count = 3,
                                           int decoy_count = 5, int slice_count = 12);
  // Same, starting from the geometry and intensities of `base`.
  static PhantomConfig with_random_lesions(const PhantomConfig& base, std::uint64_t seed,
                                           int lesion_count, int decoy_count, int slice_count);
};

enum class Tissue : std::uint8_t {
  background = 0,
  skull,
  csf,
  cortex,
  white_matter,
  ventricle,
  lesion,
  decoy,
  spot,
};

struct PhantomObject {
  int id = 0;     // lesion index, or decoy index
  int slice = 0;
  PixelSet pixels;
  Point2 centroid;
};

struct TissueTag {};

struct PhantomSliceTruth {
  BinaryMask brain;      // everything inside the outer head contour
  BinaryMask ventricle;
  BinaryMask lesion;
  BinaryMask decoy;
  Raster<std::uint8_t, TissueTag> tissue;  // Tissue per pixel
};

struct PhantomStack {
  std::vector<GrayImage> slices;
  std::vector<PhantomSliceTruth> truth;
  std::vector<PhantomObject> lesion_instances;  // one per lesion per slice
  std::vector<PhantomObject> decoys;
};

// Deterministic for a given config. Throws InvalidArgument on infeasible
// geometry (lesion outside white matter, too-weak lesion contrast).
PhantomStack generate_phantom(const PhantomConfig& config);

}  // namespace wmi
