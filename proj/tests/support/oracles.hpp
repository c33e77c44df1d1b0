#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the raster types, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "wmi/image.hpp"
#include "wmi/preprocess.hpp"

namespace oracle {

using wmi::BinaryMask;
using wmi::GrayImage;

// ---------------------------------------------------------------- generators

inline GrayImage random_gray(std::mt19937_64& rng, int w, int h, int levels = 256) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  GrayImage img(w, h);
  const int step = levels > 1 ? 255 / (levels - 1) : 0;
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(d(rng) * step);
  return img;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution d(density);
  BinaryMask m(w, h, 0);
  for (auto& v : m.pixels()) v = d(rng) ? 1 : 0;
  return m;
}

// Blocky piecewise-constant image plus noise: has plateaus, so stable regions exist.
inline GrayImage random_blobs(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> level(0, 255);
  std::uniform_int_distribution<int> noise(-3, 3);
  std::uniform_int_distribution<int> coord_x(0, w - 1);
  std::uniform_int_distribution<int> coord_y(0, h - 1);
  std::uniform_int_distribution<int> radius(1, std::max(2, w / 4));
  GrayImage img(w, h, static_cast<std::uint8_t>(level(rng)));
  const int blobs = 3 + static_cast<int>(rng() % 5);
  for (int b = 0; b < blobs; ++b) {
    const int cx = coord_x(rng), cy = coord_y(rng), r = radius(rng);
    const int v = level(rng);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img(x, y) = static_cast<std::uint8_t>(v);
      }
    }
  }
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0, 255));
  return img;
}

// ---------------------------------------------------------------- distances

// Multi-source breadth-first search over 4-neighbours. -1 when no source.
inline std::vector<int> bfs_l1(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> dist(mask.size(), -1);
  std::deque<int> q;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (mask[static_cast<std::size_t>(i)]) {
      dist[static_cast<std::size_t>(i)] = 0;
      q.push_back(i);
    }
  }
  while (!q.empty()) {
    const int p = q.front();
    q.pop_front();
    const int x = p % w, y = p / w;
    const int nx[4] = {x - 1, x + 1, x, x};
    const int ny[4] = {y, y, y - 1, y + 1};
    for (int k = 0; k < 4; ++k) {
      if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
      const auto n = static_cast<std::size_t>(ny[k] * w + nx[k]);
      if (dist[n] >= 0) continue;
      dist[n] = dist[static_cast<std::size_t>(p)] + 1;
      q.push_back(static_cast<int>(n));
    }
  }
  return dist;
}

// ---------------------------------------------------------------- components

// Flood-fill labeling; labels 1.. in raster order of first pixel, 0 = off.
inline std::vector<int> flood_labels(const BinaryMask& mask, bool eight) {
  const int w = mask.width(), h = mask.height();
  std::vector<int> label(mask.size(), 0);
  int next = 0;
  for (int start = 0; start < static_cast<int>(mask.size()); ++start) {
    if (!mask[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)]) continue;
    ++next;
    std::vector<int> stack{start};
    label[static_cast<std::size_t>(start)] = next;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int x = p % w, y = p / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
          const int qx = x + dx, qy = y + dy;
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          const auto q = static_cast<std::size_t>(qy * w + qx);
          if (!mask[q] || label[q]) continue;
          label[q] = next;
          stack.push_back(static_cast<int>(q));
        }
      }
    }
  }
  return label;
}

// True when both labelings induce the same partition of the pixels (0 = background in both).
template <typename A, typename B>
bool same_partition(const A& a, const B& b) {
  if (a.size() != b.size()) return false;
  std::map<long long, long long> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long long la = a[i], lb = b[i];
    if ((la == 0) != (lb == 0)) return false;
    if (la == 0) continue;
    if (auto [it, fresh] = ab.emplace(la, lb); !fresh && it->second != lb) return false;
    if (auto [it, fresh] = ba.emplace(lb, la); !fresh && it->second != la) return false;
  }
  return true;
}

// Holes: false 4-components that never touch the border.
inline BinaryMask fill_holes(const BinaryMask& mask) {
  BinaryMask inverted(mask.width(), mask.height(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) inverted[i] = mask[i] ? 0 : 1;
  const std::vector<int> lab = flood_labels(inverted, false);
  std::set<int> touches;
  const int w = mask.width(), h = mask.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) touches.insert(lab[static_cast<std::size_t>(y * w + x)]);
    }
  }
  BinaryMask out = mask;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (lab[i] != 0 && !touches.count(lab[i])) out[i] = 1;
  }
  return out;
}

// ---------------------------------------------------------------- Otsu

// Exhaustive scan of every threshold. The within-class sum of squares of a
// class is A_c / n_c^2 with A_c = sum (n_c g - S_c)^2, an integer; two
// candidates are compared exactly by cross-multiplying. nullopt when no
// threshold splits the pixels into two non-empty classes.
inline std::optional<int> otsu_exhaustive(const GrayImage& img) {
  __extension__ typedef __int128 i128;
  std::optional<int> best;
  i128 best_num = 0, best_den = 1;
  for (int t = 0; t <= 254; ++t) {
    long long n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (auto v : img.pixels()) {
      if (v <= t) {
        ++n0;
        s0 += v;
      } else {
        ++n1;
        s1 += v;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    i128 a0 = 0, a1 = 0;
    for (auto v : img.pixels()) {
      if (v <= t) {
        const i128 d = static_cast<i128>(n0) * v - s0;
        a0 += d * d;
      } else {
        const i128 d = static_cast<i128>(n1) * v - s1;
        a1 += d * d;
      }
    }
    // within = a0 / n0^2 + a1 / n1^2 = (a0 n1^2 + a1 n0^2) / (n0^2 n1^2)
    const i128 num = a0 * n1 * n1 + a1 * n0 * n0;
    const i128 den = static_cast<i128>(n0) * n0 * n1 * n1;
    // num/den < best_num/best_den, strict so the smallest t wins ties.
    if (!best || num * best_den < best_num * den) {
      best = t;
      best_num = num;
      best_den = den;
    }
  }
  return best;
}

// ---------------------------------------------------------------- MSER

// Dark MSER by sweeping every threshold and flood-filling {I <= t}. Returns the
// set of qualifying pixel sets (ascending indices).
inline std::set<std::vector<int>> naive_mser(const GrayImage& img, int delta, int min_area, int max_area,
                                             double max_variation) {
  const int n = static_cast<int>(img.size());
  // comp[t][p] = component label of p at level t (0 when img[p] > t).
  std::vector<std::vector<int>> comp(256);
  std::vector<std::vector<int>> size(256);
  std::vector<std::vector<int>> min_px(256);
  for (int t = 0; t < 256; ++t) {
    BinaryMask m(img.width(), img.height(), 0);
    for (int p = 0; p < n; ++p) m[static_cast<std::size_t>(p)] = img[static_cast<std::size_t>(p)] <= t;
    comp[t] = flood_labels(m, false);
    int count = 0;
    for (int l : comp[t]) count = std::max(count, l);
    size[t].assign(static_cast<std::size_t>(count) + 1, 0);
    min_px[t].assign(static_cast<std::size_t>(count) + 1, n);
    for (int p = 0; p < n; ++p) {
      const int l = comp[t][static_cast<std::size_t>(p)];
      if (!l) continue;
      ++size[t][static_cast<std::size_t>(l)];
      min_px[t][static_cast<std::size_t>(l)] = std::min(min_px[t][static_cast<std::size_t>(l)], p);
    }
  }
  auto pixels_of = [&](int t, int l) {
    std::vector<int> px;
    for (int p = 0; p < n; ++p) {
      if (comp[t][static_cast<std::size_t>(p)] == l) px.push_back(p);
    }
    return px;
  };
  // Largest sub-component at level t-1 of component l at level t; 0 if none.
  auto main_child = [&](int t, int l) {
    if (t == 0) return 0;
    int best = 0;
    std::map<int, int> seen;
    for (int p = 0; p < n; ++p) {
      if (comp[t][static_cast<std::size_t>(p)] != l) continue;
      const int c = comp[t - 1][static_cast<std::size_t>(p)];
      if (c) seen[c] = 1;
    }
    for (const auto& [c, unused] : seen) {
      (void)unused;
      if (!best) {
        best = c;
        continue;
      }
      const int sc = size[t - 1][static_cast<std::size_t>(c)], sb = size[t - 1][static_cast<std::size_t>(best)];
      if (sc > sb || (sc == sb && min_px[t - 1][static_cast<std::size_t>(c)] < min_px[t - 1][static_cast<std::size_t>(best)])) {
        best = c;
      }
    }
    return best;
  };
  auto area_below = [&](int t, int l, int steps) {
    while (steps-- > 0) {
      l = main_child(t, l);
      --t;
      if (!l) return 0;
    }
    return size[t][static_cast<std::size_t>(l)];
  };
  auto area_above = [&](int t, int l, int steps) {
    const int p = min_px[t][static_cast<std::size_t>(l)];
    const int up = t + steps;
    if (up > 255) return n;
    return size[up][static_cast<std::size_t>(comp[up][static_cast<std::size_t>(p)])];
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto q = [&](int t, int l) -> double {
    if (t < 0 || t > 255 || l == 0) return inf;
    const int below = t - delta < 0 ? 0 : area_below(t, l, delta);
    return static_cast<double>(area_above(t, l, delta) - below) / size[t][static_cast<std::size_t>(l)];
  };

  std::set<std::vector<int>> out;
  for (int t = 0; t < 256; ++t) {
    for (int l = 1; l < static_cast<int>(size[t].size()); ++l) {
      const int a = size[t][static_cast<std::size_t>(l)];
      if (a < min_area || a > max_area) continue;
      const double here = q(t, l);
      if (here > max_variation) continue;
      const double prev = t == 0 ? inf : q(t - 1, main_child(t, l));
      double next = inf;
      if (t < 255) {
        const int p = min_px[t][static_cast<std::size_t>(l)];
        next = q(t + 1, comp[t + 1][static_cast<std::size_t>(p)]);
      }
      if (here <= prev && here <= next) out.insert(pixels_of(t, l));
    }
  }
  return out;
}

// ---------------------------------------------------------------- GA

struct SubsetOptimum {
  double fitness = 0.0;
  unsigned mask = 0;
};

// Exhaustive search of N_s * prod(C_i) over all non-empty subsets.
inline SubsetOptimum best_subset(const std::vector<double>& conf) {
  SubsetOptimum best;
  const unsigned n = static_cast<unsigned>(conf.size());
  for (unsigned m = 1; m < (1u << n); ++m) {
    double prod = 1.0;
    int count = 0;
    for (unsigned i = 0; i < n; ++i) {
      if (m & (1u << i)) {
        prod *= conf[i];
        ++count;
      }
    }
    if (count * prod > best.fitness) best = {count * prod, m};
  }
  return best;
}

// ---------------------------------------------------------------- statistics

inline double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::pair<double, double> median_mad(const std::vector<double>& v) {
  const double med = sorted_median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::fabs(x - med));
  return {med, sorted_median(dev)};
}

// Plain Lloyd iterations on 1-D sizes, means seeded at min and max, ties to small.
inline std::vector<bool> lloyd_two_means(const std::vector<int>& sizes) {
  std::vector<bool> small(sizes.size(), true);
  if (sizes.size() < 2) return small;
  double ms = *std::min_element(sizes.begin(), sizes.end());
  double mb = *std::max_element(sizes.begin(), sizes.end());
  for (int round = 0; round < 1000; ++round) {
    std::vector<bool> next(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) next[i] = std::fabs(sizes[i] - ms) <= std::fabs(sizes[i] - mb);
    double ss = 0, sb = 0;
    int ns = 0, nb = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      (next[i] ? ss : sb) += sizes[i];
      (next[i] ? ns : nb) += 1;
    }
    if (ns) ms = ss / ns;
    if (nb) mb = sb / nb;
    if (round > 0 && next == small) break;
    small = next;
  }
  return small;
}

// ---------------------------------------------------------------- diffusion

// Straightforward Perona-Malik with rational conduction and mirrored borders,
// kept in double precision and rounded once at the end.
inline GrayImage perona_malik(const GrayImage& img, int iterations, double lambda, double kappa, bool rational) {
  const int w = img.width(), h = img.height();
  std::vector<double> u(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) u[i] = img[i];
  auto g = [&](double d) {
    const double r = d / kappa;
    return rational ? 1.0 / (1.0 + r * r) : std::exp(-r * r);
  };
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> next(u.size());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double c = u[static_cast<std::size_t>(y * w + x)];
        auto at = [&](int xx, int yy) {
          xx = std::clamp(xx, 0, w - 1);
          yy = std::clamp(yy, 0, h - 1);
          return u[static_cast<std::size_t>(yy * w + xx)];
        };
        const double dn = at(x, y - 1) - c, ds = at(x, y + 1) - c, de = at(x + 1, y) - c, dw = at(x - 1, y) - c;
        next[static_cast<std::size_t>(y * w + x)] =
            c + lambda * (g(std::fabs(dn)) * dn + g(std::fabs(ds)) * ds + g(std::fabs(de)) * de + g(std::fabs(dw)) * dw);
      }
    }
    u = std::move(next);
  }
  GrayImage out(w, h);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(u[i]), 0L, 255L));
  return out;
}

}  // namespace oracle
