#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wmi/image.hpp"
#include "wmi/mser.hpp"
#include "wmi/preprocess.hpp"

namespace wmi {

// Per-pixel ventricle confidence inputs, all in [0,1].
struct ConfidenceContext {
  UnitImage boundary_distance;  // D_p: normalised city-block distance to the background
  UnitImage inverted;           // I_c: normalised 255 - cleaned
  UnitImage confidence;         // L_p: normalised D_p * I_c
};

struct ScoredRegion {
  ExtremalRegion region;
  double confidence = 0.0;  // mean of L_p over the region
};

struct GaParams {
  int population = 50;
  int generations = 100;
  double crossover_rate = 0.8;
  double mutation_rate = -1.0;  // negative means 1 / bit count
  int elitism = 2;
  std::uint64_t rng_seed = 42;

  void validate() const;
};

struct VentricleSelection {
  std::vector<ScoredRegion> selected;
  std::vector<std::uint8_t> bits;
  double fitness = 0.0;
  BinaryMask mask;
  // Best-ever fitness after the initial population and after each generation.
  std::vector<double> best_history;
};

ConfidenceContext build_confidence(const PreprocessResult& pre);

std::vector<ScoredRegion> score_regions(std::span<const ExtremalRegion> regions,
                                        const ConfidenceContext& ctx);

// N_s times the product of the selected confidences; 0 for an empty selection.
double selection_fitness(std::span<const std::uint8_t> bits, std::span<const ScoredRegion> scored);

// Generational GA over inclusion bitstrings with size-2 tournaments and
// single-point crossover. Mutation flips bits independently; the best
// `elitism` strings survive unchanged. Besides random strings, the initial
// population seeds the all-ones string next to the single most confident region.
// Deterministic for a given seed. An empty input yields an empty selection
// with an all-false mask of the given shape.
VentricleSelection ga_select(std::span<const ScoredRegion> scored, const GaParams& params,
                             int width, int height);

}  // namespace wmi
