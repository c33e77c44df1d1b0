#include "wmi/ventricle.hpp"

#include <algorithm>
#include <numeric>

#include "wmi/image_ops.hpp"
#include "wmi/random.hpp"

namespace wmi {

void GaParams::validate() const {
  if (population < 2) throw InvalidArgument("ga: population must be >= 2");
  if (generations < 0) throw InvalidArgument("ga: generations must be >= 0");
  if (elitism < 0 || elitism >= population) throw InvalidArgument("ga: need 0 <= elitism < population");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) throw InvalidArgument("ga: crossover_rate outside [0,1]");
  if (mutation_rate > 1.0) throw InvalidArgument("ga: mutation_rate above 1");
}

ConfidenceContext build_confidence(const PreprocessResult& pre) {
  if (count_true(pre.background) == 0) {
    throw Undetectable("build_confidence: slice has no background pixel");
  }
  ConfidenceContext ctx{distance_transform_l1(pre.background),
                        normalize_to_unit(complement(pre.cleaned)), UnitImage{}};
  ctx.confidence = hadamard(ctx.boundary_distance, ctx.inverted);
  return ctx;
}

std::vector<ScoredRegion> score_regions(std::span<const ExtremalRegion> regions,
                                        const ConfidenceContext& ctx) {
  std::vector<ScoredRegion> out;
  out.reserve(regions.size());
  for (const auto& r : regions) {
    double sum = 0.0;
    for (PixelIndex p : r.pixels) sum += ctx.confidence[static_cast<std::size_t>(p)];
    out.push_back({r, r.pixels.empty() ? 0.0 : sum / static_cast<double>(r.pixels.size())});
  }
  return out;
}

double selection_fitness(std::span<const std::uint8_t> bits, std::span<const ScoredRegion> scored) {
  if (bits.size() != scored.size()) throw InvalidArgument("selection_fitness: bit length != region count");
  int count = 0;
  double product = 1.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    ++count;
    product *= scored[i].confidence;
  }
  return count == 0 ? 0.0 : count * product;
}

namespace {
using Genome = std::vector<std::uint8_t>;
}  // namespace

VentricleSelection ga_select(std::span<const ScoredRegion> scored, const GaParams& params,
                             int width, int height) {
  params.validate();
  VentricleSelection result;
  result.mask = BinaryMask(width, height, 0);
  const std::size_t bits = scored.size();
  if (bits == 0) return result;

  const double mutation = params.mutation_rate < 0.0 ? 1.0 / static_cast<double>(bits) : params.mutation_rate;
  const auto pop_size = static_cast<std::size_t>(params.population);
  Rng rng(params.rng_seed);

  std::vector<Genome> pop;
  pop.reserve(pop_size);
  pop.emplace_back(bits, 1);
  {
    Genome best_single(bits, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < bits; ++i) {
      if (scored[i].confidence > scored[best].confidence) best = i;
    }
    best_single[best] = 1;
    pop.push_back(std::move(best_single));
  }
  while (pop.size() < pop_size) {
    Genome g(bits);
    for (auto& b : g) b = rng.uniform() < 0.5 ? 1 : 0;
    pop.push_back(std::move(g));
  }

  std::vector<double> fit(pop_size);
  auto evaluate = [&] {
    for (std::size_t i = 0; i < pop_size; ++i) fit[i] = selection_fitness(pop[i], scored);
  };
  Genome best_genome;
  double best_fit = -1.0;
  auto track_best = [&] {
    for (std::size_t i = 0; i < pop_size; ++i) {
      if (fit[i] > best_fit) {
        best_fit = fit[i];
        best_genome = pop[i];
      }
    }
    result.best_history.push_back(best_fit);
  };
  evaluate();
  track_best();

  auto tournament = [&]() -> const Genome& {
    const std::size_t a = rng.below(pop_size);
    const std::size_t b = rng.below(pop_size);
    return fit[b] > fit[a] ? pop[b] : pop[a];
  };

  std::vector<std::size_t> order(pop_size);
  for (int gen = 0; gen < params.generations; ++gen) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    std::vector<Genome> next;
    next.reserve(pop_size);
    for (int e = 0; e < params.elitism; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);

    while (next.size() < pop_size) {
      Genome a = tournament();
      Genome b = tournament();
      if (bits > 1 && rng.uniform() < params.crossover_rate) {
        const std::size_t cut = 1 + rng.below(bits - 1);
        for (std::size_t i = cut; i < bits; ++i) std::swap(a[i], b[i]);
      }
      for (Genome* child : {&a, &b}) {
        for (auto& bit : *child) {
          if (rng.uniform() < mutation) bit ^= 1;
        }
      }
      next.push_back(std::move(a));
      if (next.size() < pop_size) next.push_back(std::move(b));
    }
    pop = std::move(next);
    evaluate();
    track_best();
  }

  result.bits = best_genome;
  result.fitness = best_fit;
  for (std::size_t i = 0; i < bits; ++i) {
    if (!best_genome[i]) continue;
    result.selected.push_back(scored[i]);
    for (PixelIndex p : scored[i].region.pixels) result.mask[static_cast<std::size_t>(p)] = 1;
  }
  return result;
}

}  // namespace wmi
