#include "wmi/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wmi/image_ops.hpp"
#include "wmi/random.hpp"

namespace wmi {

namespace {

using TissueMap = Raster<std::uint8_t, TissueTag>;

constexpr double kPi = std::numbers::pi;
constexpr double kCortexGapHalfWidth = 4.5;  // pixels of arc length
constexpr double kSpotHalfWidth = 1.0;
constexpr int kWmMargin = 6;

struct Frame {
  double cx, cy, rx, ry;
};

Frame head_frame(const PhantomConfig& c) {
  return {(c.width - 1) / 2.0, (c.height - 1) / 2.0, 0.46 * c.width, 0.46 * c.height};
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a < -kPi) a += 2 * kPi;
  return a;
}

double gap_angle(const PhantomConfig& c, int k) {
  return wrap_angle(2 * kPi * k / c.cortex_arcs + 0.3);
}

// Ventricle size profile across the stack: smaller at the ends.
double ventricle_scale(const PhantomConfig& c, int slice) {
  return 0.55 + 0.45 * std::sin(kPi * (slice + 0.5) / c.slice_count);
}

bool in_ellipse(double x, double y, double cx, double cy, double ax, double ay, double tilt = 0.0) {
  const double dx = x - cx;
  const double dy = y - cy;
  const double u = dx * std::cos(tilt) + dy * std::sin(tilt);
  const double v = -dx * std::sin(tilt) + dy * std::cos(tilt);
  return (u * u) / (ax * ax) + (v * v) / (ay * ay) <= 1.0;
}

bool in_ventricle(const PhantomConfig& c, const Frame& f, int slice, double x, double y) {
  const double s = ventricle_scale(c, slice);
  const double w = c.width;
  const double h = c.height;
  if (c.ventricle_shape == VentricleShape::simple) {
    return in_ellipse(x, y, f.cx, f.cy + 0.02 * h, 0.12 * w * s, 0.08 * h * s);
  }
  return in_ellipse(x, y, f.cx - 0.09 * w, f.cy - 0.01 * h, 0.055 * w * s, 0.10 * h * s, 0.35) ||
         in_ellipse(x, y, f.cx + 0.09 * w, f.cy - 0.01 * h, 0.055 * w * s, 0.10 * h * s, -0.35) ||
         in_ellipse(x, y, f.cx, f.cy + 0.11 * h, 0.045 * w * s, 0.03 * h * s);
}

// Tissue layout of one slice without lesions, decoys or noise.
TissueMap anatomy(const PhantomConfig& c, int slice) {
  const Frame f = head_frame(c);
  BinaryMask outside(c.width, c.height, 1);
  for (int y = 0; y < c.height; ++y) {
    for (int x = 0; x < c.width; ++x) {
      if (in_ellipse(x, y, f.cx, f.cy, f.rx, f.ry)) outside(x, y) = 0;
    }
  }
  const DistanceMap depth = distance_transform_l1_raw(outside);
  const int base = c.skull ? 4 : 0;

  TissueMap t(c.width, c.height, static_cast<std::uint8_t>(Tissue::background));
  for (int y = 0; y < c.height; ++y) {
    for (int x = 0; x < c.width; ++x) {
      const int d = depth(x, y);
      if (d == 0) continue;
      Tissue tissue = Tissue::white_matter;
      if (c.skull && d <= 2) {
        tissue = Tissue::skull;
      } else if (c.skull && d <= 4) {
        tissue = Tissue::csf;
      } else if (d <= base + 3) {
        const double theta = std::atan2((y - f.cy) / f.ry, (x - f.cx) / f.rx);
        const double r = std::hypot(x - f.cx, y - f.cy);
        tissue = Tissue::cortex;
        for (int k = 0; k < c.cortex_arcs; ++k) {
          const double arc = std::abs(wrap_angle(theta - gap_angle(c, k))) * r;
          if (arc <= kSpotHalfWidth && k < c.juxtacortical_spots) {
            tissue = Tissue::spot;
            break;
          }
          if (arc <= kCortexGapHalfWidth) {
            tissue = Tissue::white_matter;
            break;
          }
        }
      } else if (in_ventricle(c, f, slice, x, y)) {
        tissue = Tissue::ventricle;
      }
      t(x, y) = static_cast<std::uint8_t>(tissue);
    }
  }
  return t;
}

double centroid_distance_unit(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point2 to_pixels(const PhantomConfig& c, Point2 p) {
  return {p.x * (c.width - 1), p.y * (c.height - 1)};
}

Point2 lesion_center(const LesionSpec& l, int slice) {
  const int k = slice - l.first_slice;
  return {l.center.x + l.drift.x * k, l.center.y + l.drift.y * k};
}

// Pixels of the disk, or an empty set when the disk plus a margin leaves the
// white matter.
PixelSet place_disk(const PhantomConfig& c, const TissueMap& t, Point2 center_norm, double radius) {
  const Point2 p = to_pixels(c, center_norm);
  const double reach = radius + kWmMargin;
  PixelSet px;
  for (int y = static_cast<int>(std::floor(p.y - reach)); y <= static_cast<int>(std::ceil(p.y + reach)); ++y) {
    for (int x = static_cast<int>(std::floor(p.x - reach)); x <= static_cast<int>(std::ceil(p.x + reach)); ++x) {
      const double d = std::hypot(x - p.x, y - p.y);
      if (d > reach) continue;
      if (!t.contains(x, y) || t(x, y) != static_cast<std::uint8_t>(Tissue::white_matter)) return {};
      if (d <= radius) px.push_back(static_cast<PixelIndex>(t.index(x, y)));
    }
  }
  std::sort(px.begin(), px.end());
  return px;
}

}  // namespace

PhantomConfig PhantomConfig::with_random_lesions(std::uint64_t seed, int lesion_count, int decoy_count,
                                                 int slice_count) {
  return with_random_lesions(PhantomConfig{}, seed, lesion_count, decoy_count, slice_count);
}

PhantomConfig PhantomConfig::with_random_lesions(const PhantomConfig& base, std::uint64_t seed,
                                                 int lesion_count, int decoy_count, int slice_count) {
  PhantomConfig c = base;
  c.lesions.clear();
  c.rng_seed = seed;
  c.decoy_count = decoy_count;
  c.slice_count = slice_count;
  Rng rng(seed ^ 0x5EED1E5105ULL);
  std::vector<TissueMap> anat;
  for (int s = 0; s < c.slice_count; ++s) anat.push_back(anatomy(c, s));

  const int span = std::min(3, c.slice_count);
  for (int attempt = 0; attempt < 20000 && static_cast<int>(c.lesions.size()) < lesion_count; ++attempt) {
    LesionSpec l;
    l.radius = rng.uniform(3.0, 4.2);
    l.span_slices = span;
    const int first_max = c.slice_count - span;
    l.first_slice = first_max <= 0 ? 0 : static_cast<int>(rng.below(static_cast<std::size_t>(first_max + 1)));
    l.center = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
    const double angle = rng.uniform(0.0, 2 * kPi);
    const double step = rng.uniform(0.0, 0.02);
    l.drift = {step * std::cos(angle), step * std::sin(angle)};
    l.intensity_boost = 45 + static_cast<int>(rng.below(16));

    bool ok = true;
    for (int s = l.first_slice; ok && s < l.first_slice + l.span_slices; ++s) {
      ok = !place_disk(c, anat[static_cast<std::size_t>(s)], lesion_center(l, s), l.radius).empty();
      for (const auto& o : c.lesions) {
        if (!ok || s < o.first_slice - 1 || s > o.first_slice + o.span_slices) continue;
        const int so = std::clamp(s, o.first_slice, o.first_slice + o.span_slices - 1);
        const Point2 a = to_pixels(c, lesion_center(l, s));
        const Point2 b = to_pixels(c, lesion_center(o, so));
        ok = std::hypot(a.x - b.x, a.y - b.y) >= l.radius + o.radius + 4.0;
      }
    }
    if (ok) c.lesions.push_back(l);
  }
  if (static_cast<int>(c.lesions.size()) < lesion_count) {
    throw InvalidArgument("phantom: could not place " + std::to_string(lesion_count) + " lesions");
  }
  return c;
}

PhantomStack generate_phantom(const PhantomConfig& c) {
  if (c.slice_count < 1) throw InvalidArgument("phantom: slice_count must be >= 1");
  if (c.cortex_arcs < 1 || c.juxtacortical_spots > c.cortex_arcs) {
    throw InvalidArgument("phantom: need at least one cortical arc and no more spots than arcs");
  }
  const double min_boost = 3.0 * c.noise_sigma;
  std::vector<TissueMap> tissue;
  for (int s = 0; s < c.slice_count; ++s) tissue.push_back(anatomy(c, s));
  const std::vector<TissueMap> bare = tissue;

  PhantomStack stack;

  // Lesions.
  for (std::size_t li = 0; li < c.lesions.size(); ++li) {
    const LesionSpec& l = c.lesions[li];
    if (l.intensity_boost < min_boost) {
      throw InvalidArgument("phantom: lesion contrast below 3 noise sigmas");
    }
    if (l.first_slice < 0 || l.span_slices < 1 || l.first_slice + l.span_slices > c.slice_count) {
      throw InvalidArgument("phantom: lesion slice span outside the stack");
    }
    for (int s = l.first_slice; s < l.first_slice + l.span_slices; ++s) {
      TissueMap& t = tissue[static_cast<std::size_t>(s)];
      const PixelSet px = place_disk(c, bare[static_cast<std::size_t>(s)], lesion_center(l, s), l.radius);
      if (px.empty()) {
        throw InvalidArgument("phantom: lesion " + std::to_string(li) + " leaves the white matter on slice " +
                              std::to_string(s));
      }
      for (PixelIndex p : px) t[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(Tissue::lesion);
      stack.lesion_instances.push_back(
          {static_cast<int>(li), s, px, object_centroid(px, c.width, c.height)});
    }
  }

  // Single-slice decoys, kept clear of everything on the neighbouring slices.
  Rng rng(c.rng_seed ^ 0xDEC0F00DULL);
  const Frame f = head_frame(c);
  std::vector<Point2> spot_centres;
  for (int k = 0; k < c.juxtacortical_spots; ++k) {
    const double a = gap_angle(c, k);
    spot_centres.push_back({(f.cx + f.rx * std::cos(a) * 0.9) / (c.width - 1),
                            (f.cy + f.ry * std::sin(a) * 0.9) / (c.height - 1)});
  }
  for (int d = 0, attempt = 0; d < c.decoy_count; ++attempt) {
    if (attempt > 50000) throw InvalidArgument("phantom: could not place decoys");
    const int s = static_cast<int>(rng.below(static_cast<std::size_t>(c.slice_count)));
    const Point2 centre{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
    bool ok = true;
    for (const auto& o : stack.lesion_instances) {
      ok = ok && (std::abs(o.slice - s) > 1 || centroid_distance_unit(o.centroid, centre) >= c.decoy_separation);
    }
    for (const auto& o : stack.decoys) {
      ok = ok && (std::abs(o.slice - s) > 1 || centroid_distance_unit(o.centroid, centre) >= c.decoy_separation);
    }
    for (const auto& sp : spot_centres) ok = ok && centroid_distance_unit(sp, centre) >= c.decoy_separation;
    if (!ok) continue;
    TissueMap& t = tissue[static_cast<std::size_t>(s)];
    const PixelSet px = place_disk(c, t, centre, c.decoy_radius);
    if (px.empty()) continue;
    for (PixelIndex p : px) t[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(Tissue::decoy);
    stack.decoys.push_back({d, s, px, object_centroid(px, c.width, c.height)});
    ++d;
  }

  // Render.
  for (int s = 0; s < c.slice_count; ++s) {
    const TissueMap& t = tissue[static_cast<std::size_t>(s)];
    Rng noise(c.rng_seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s) + 1);
    GrayImage img(c.width, c.height);
    PhantomSliceTruth truth{BinaryMask(c.width, c.height, 0), BinaryMask(c.width, c.height, 0),
                            BinaryMask(c.width, c.height, 0), BinaryMask(c.width, c.height, 0), t};
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto tissue_kind = static_cast<Tissue>(t[i]);
      double level = c.wm_level;
      double sigma = c.noise_sigma;
      switch (tissue_kind) {
        case Tissue::background: level = c.background_level; sigma = c.background_noise_sigma; break;
        case Tissue::skull: level = c.skull_level; break;
        case Tissue::csf: level = c.csf_level; break;
        case Tissue::cortex:
        case Tissue::spot: level = c.cortex_level; break;
        case Tissue::white_matter: level = c.wm_level; break;
        case Tissue::ventricle: level = c.ventricle_level; break;
        case Tissue::lesion: level = c.wm_level; break;
        case Tissue::decoy: level = c.wm_level + c.decoy_boost; break;
      }
      const double v = level + sigma * noise.normal();
      img[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      truth.brain[i] = tissue_kind != Tissue::background ? 1 : 0;
      truth.ventricle[i] = tissue_kind == Tissue::ventricle ? 1 : 0;
      truth.lesion[i] = tissue_kind == Tissue::lesion ? 1 : 0;
      truth.decoy[i] = tissue_kind == Tissue::decoy ? 1 : 0;
    }
    stack.slices.push_back(std::move(img));
    stack.truth.push_back(std::move(truth));
  }

  // Lesion intensities differ per lesion; apply boosts on top of the rendered white matter level.
  for (const auto& inst : stack.lesion_instances) {
    const int boost = c.lesions[static_cast<std::size_t>(inst.id)].intensity_boost;
    GrayImage& img = stack.slices[static_cast<std::size_t>(inst.slice)];
    for (PixelIndex p : inst.pixels) {
      img[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(std::min(255, img[static_cast<std::size_t>(p)] + boost));
    }
  }
  return stack;
}

}  // namespace wmi
