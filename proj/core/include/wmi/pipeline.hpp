#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmi/coarse.hpp"
#include "wmi/fine.hpp"
#include "wmi/image.hpp"
#include "wmi/mser.hpp"
#include "wmi/preprocess.hpp"
#include "wmi/ventricle.hpp"

namespace wmi {

struct PipelineConfig {
  bool diffusion = true;
  DiffusionParams diffusion_params;

  int mser_delta = 5;
  double mser_min_area_fraction = 0.001;
  double mser_max_area_fraction = 0.25;
  double mser_max_variation = 0.5;

  GaParams ga;
  double z_threshold = 0.0;
  FilterParams filter;
  FineParams fine;

  int threads = 1;

  MserParams mser_for(int width, int height) const;
  void validate() const;
};

// Everything the coarse stage produced for one slice.
struct SliceResult {
  bool detected = false;   // false when the slice was skipped as undetectable
  std::string note;        // reason for skipping
  GrayImage working;       // denoised (if enabled) and background-whitened slice
  BinaryMask foreground;   // M_f; all false when Otsu failed
  BinaryMask ventricles;   // M_v
  std::size_t mser_regions = 0;
  double ga_fitness = 0.0;
  CoarseResult coarse;
  double elapsed_ms = 0.0;
};

struct VolumeResult {
  std::vector<SliceResult> slices;
  VolumeDetection detection;
  std::vector<BinaryMask> candidate_masks;  // union of coarse candidates per slice
  std::vector<BinaryMask> confirmed_masks;  // union of confirmed candidates per slice
  double coarse_ms = 0.0;  // wall time of the coarse stage
  double fine_ms = 0.0;    // wall time of the fine stage
};

// Seed of the ventricle GA for a given slice, independent of scheduling.
std::uint64_t slice_seed(std::uint64_t base, std::size_t slice_index);

// Coarse detection on one slice. Undetectable slices come back with
// detected = false and no candidates rather than throwing.
SliceResult coarse_detect_slice(const GrayImage& slice, const PipelineConfig& config,
                                std::uint64_t seed);

// Coarse stage fanned out over config.threads workers, then fine validation.
// Output is independent of the thread count.
VolumeResult detect_volume(std::span<const GrayImage> slices, const PipelineConfig& config);

BinaryMask candidates_to_mask(std::span<const CandidateObject> objects, int width, int height);

}  // namespace wmi
