#include "wmi/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wmi/image_ops.hpp"

namespace wmi {

GrayImage perona_malik(const GrayImage& img, const DiffusionParams& params) {
  if (params.iterations < 0) throw InvalidArgument("perona_malik: iterations must be >= 0");
  if (!(params.lambda > 0.0 && params.lambda <= 0.25)) {
    throw InvalidArgument("perona_malik: lambda must lie in (0, 1/4] for stability");
  }
  if (!(params.kappa > 0.0)) throw InvalidArgument("perona_malik: kappa must be positive");
  if (params.iterations == 0) return img;

  const int w = img.width();
  const int h = img.height();
  const double inv_k2 = 1.0 / (params.kappa * params.kappa);
  auto conduct = [&](double d) {
    const double r = d * d * inv_k2;
    return params.conduction == Conduction::rational ? 1.0 / (1.0 + r) : std::exp(-r);
  };

  RealImage cur = to_real(img);
  RealImage next(w, h);
  for (int it = 0; it < params.iterations; ++it) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double c = cur(x, y);
        // Reflecting border: a missing neighbour contributes a zero gradient.
        const double dn = y > 0 ? cur(x, y - 1) - c : 0.0;
        const double ds = y + 1 < h ? cur(x, y + 1) - c : 0.0;
        const double de = x + 1 < w ? cur(x + 1, y) - c : 0.0;
        const double dw = x > 0 ? cur(x - 1, y) - c : 0.0;
        next(x, y) = c + params.lambda * (conduct(dn) * dn + conduct(ds) * ds +
                                          conduct(de) * de + conduct(dw) * dw);
      }
    }
    std::swap(cur, next);
  }

  GrayImage out(w, h);
  for (std::size_t i = 0; i < cur.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(cur[i]), 0L, 255L));
  }
  return out;
}

std::uint8_t otsu_threshold(const GrayImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.pixels()) ++hist[v];

  __extension__ using u128 = unsigned __int128;
  const std::uint64_t n = img.size();
  std::uint64_t total_sum = 0;
  for (std::size_t g = 0; g < 256; ++g) total_sum += g * hist[g];

  // Minimising the within-class variance is the same as maximising
  // S0^2/n0 + S1^2/n1, kept as an exact fraction (S0^2 n1 + S1^2 n0) / (n0 n1).
  bool found = false;
  u128 best_num = 0;
  u128 best_den = 1;
  int best_t = 0;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[static_cast<std::size_t>(t)];
    s0 += static_cast<std::uint64_t>(t) * hist[static_cast<std::size_t>(t)];
    const std::uint64_t n1 = n - n0;
    if (n0 == 0 || n1 == 0) continue;
    const std::uint64_t s1 = total_sum - s0;
    const u128 num = u128(s0) * s0 * n1 + u128(s1) * s1 * n0;
    const u128 den = u128(n0) * n1;
    if (!found || num * best_den > best_num * den) {
      found = true;
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  if (!found) throw Undetectable("otsu_threshold: image has a single intensity");
  return static_cast<std::uint8_t>(best_t);
}

PreprocessResult segregate_background(const GrayImage& img) {
  const std::uint8_t th = otsu_threshold(img);
  BinaryMask raw(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) raw[i] = img[i] > th ? 1 : 0;

  PreprocessResult r{img, fill_holes(raw), BinaryMask{}, th};
  r.background = mask_not(r.foreground);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (r.background[i]) r.cleaned[i] = 255;
  }
  return r;
}

}  // namespace wmi
