#include "wmi/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wmi/image_ops.hpp"

namespace wmi {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

MserParams PipelineConfig::mser_for(int width, int height) const {
  const double n = static_cast<double>(width) * height;
  MserParams p;
  p.delta = mser_delta;
  p.min_area = std::max(1, static_cast<int>(std::lround(mser_min_area_fraction * n)));
  p.max_area = std::max(p.min_area + 1, static_cast<int>(std::lround(mser_max_area_fraction * n)));
  p.max_area = std::min(p.max_area, width * height);
  p.max_variation = mser_max_variation;
  return p;
}

void PipelineConfig::validate() const {
  if (diffusion) {
    // perona_malik performs the range checks; run it on a tiny image once.
    perona_malik(GrayImage(kMinRasterSide, kMinRasterSide, 0), diffusion_params);
  }
  if (mser_delta < 1) throw InvalidArgument("mser delta must be >= 1");
  if (!(mser_min_area_fraction > 0.0 && mser_min_area_fraction < mser_max_area_fraction &&
        mser_max_area_fraction <= 1.0)) {
    throw InvalidArgument("mser area fractions must satisfy 0 < min < max <= 1");
  }
  if (!(mser_max_variation > 0.0)) throw InvalidArgument("mser max variation must be positive");
  ga.validate();
  if (!(filter.discard_fraction >= 0.0 && filter.discard_fraction < 1.0)) {
    throw InvalidArgument("discard fraction must lie in [0,1)");
  }
  if (filter.min_lesion_size < 0) throw InvalidArgument("min lesion size must be >= 0");
  fine.validate();
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
}

std::uint64_t slice_seed(std::uint64_t base, std::size_t slice_index) {
  // splitmix64 finaliser over base + index * golden ratio.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(slice_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SliceResult coarse_detect_slice(const GrayImage& slice, const PipelineConfig& config,
                                std::uint64_t seed) {
  const auto t0 = Clock::now();
  const int w = slice.width();
  const int h = slice.height();
  SliceResult r;
  r.working = config.diffusion ? perona_malik(slice, config.diffusion_params) : slice;
  r.foreground = BinaryMask(w, h, 0);
  r.ventricles = BinaryMask(w, h, 0);
  r.coarse.contour = BinaryMask(w, h, 0);
  r.coarse.wm_mask = BinaryMask(w, h, 0);
  r.coarse.candidate_mask = BinaryMask(w, h, 0);

  try {
    const PreprocessResult pre = segregate_background(r.working);
    r.working = pre.cleaned;
    r.foreground = pre.foreground;

    const ConfidenceContext ctx = build_confidence(pre);
    const auto regions = detect_dark_regions(pre.cleaned, config.mser_for(w, h));
    r.mser_regions = regions.size();
    GaParams ga = config.ga;
    ga.rng_seed = seed;
    const VentricleSelection sel = ga_select(score_regions(regions, ctx), ga, w, h);
    r.ventricles = sel.mask;
    r.ga_fitness = sel.fitness;

    const DistanceMap boundary_raw = distance_transform_l1_raw(pre.background);
    r.coarse.contour = annulus_contour(boundary_raw, sel.mask, pre.foreground);
    r.coarse.wm_mask = wm_sample_mask(r.coarse.contour, sel.mask, pre.foreground);
    r.coarse.stats = wm_stats(pre.cleaned, r.coarse.wm_mask);
    r.coarse.candidate_mask =
        hyperintensity_mask(pre.cleaned, r.coarse.stats, pre.foreground, config.z_threshold);
    r.coarse.candidates =
        filter_candidates(r.coarse.candidate_mask, ctx.boundary_distance, config.filter);
    r.detected = true;
  } catch (const Undetectable& e) {
    r.detected = false;
    r.note = e.what();
    r.coarse.candidates.clear();
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

BinaryMask candidates_to_mask(std::span<const CandidateObject> objects, int width, int height) {
  BinaryMask out(width, height, 0);
  for (const auto& o : objects) {
    for (PixelIndex p : o.pixels) out[static_cast<std::size_t>(p)] = 1;
  }
  return out;
}

VolumeResult detect_volume(std::span<const GrayImage> slices, const PipelineConfig& config) {
  config.validate();
  VolumeResult out;
  out.slices.resize(slices.size());

  const auto t0 = Clock::now();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), std::max<std::size_t>(1, slices.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < slices.size(); ++i) {
      out.slices[i] = coarse_detect_slice(slices[i], config, slice_seed(config.ga.rng_seed, i));
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < slices.size(); i = next++) {
          try {
            out.slices[i] = coarse_detect_slice(slices[i], config, slice_seed(config.ga.rng_seed, i));
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();  // join
    if (failure) std::rethrow_exception(failure);
  }
  out.coarse_ms = ms_since(t0);

  const auto t1 = Clock::now();
  std::vector<std::vector<CandidateObject>> coarse;
  coarse.reserve(slices.size());
  for (const auto& s : out.slices) coarse.push_back(s.coarse.candidates);
  out.detection = fine_validate(coarse, config.fine);
  out.fine_ms = ms_since(t1);

  for (std::size_t i = 0; i < slices.size(); ++i) {
    const int w = slices[i].width();
    const int h = slices[i].height();
    out.candidate_masks.push_back(candidates_to_mask(coarse[i], w, h));
    out.confirmed_masks.push_back(candidates_to_mask(out.detection.per_slice[i].confirmed, w, h));
  }
  return out;
}

}  // namespace wmi
