#include "wmi/mser.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace wmi {

MserParams MserParams::defaults_for(int width, int height) {
  const double n = static_cast<double>(width) * height;
  MserParams p;
  p.min_area = std::max(1, static_cast<int>(std::lround(0.001 * n)));
  p.max_area = std::max(p.min_area + 1, static_cast<int>(std::lround(0.25 * n)));
  return p;
}

void MserParams::validate(std::size_t pixel_count) const {
  if (delta < 1) throw InvalidArgument("mser: delta must be >= 1");
  if (min_area <= 0 || min_area >= max_area) {
    throw InvalidArgument("mser: need 0 < min_area < max_area");
  }
  if (static_cast<std::size_t>(max_area) > pixel_count) {
    throw InvalidArgument("mser: max_area exceeds the pixel count (" + std::to_string(pixel_count) + ")");
  }
  if (!(max_variation > 0.0)) throw InvalidArgument("mser: max_variation must be positive");
}

namespace {

constexpr int kNone = -1;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  int level = 0;
  int area = 0;
  int parent = kNone;
  int first_child = kNone;
  int next_sibling = kNone;
  int own_head = kNone;  // head of the list of pixels accumulated at this node
  int main_child = kNone;
  PixelIndex min_pixel = std::numeric_limits<PixelIndex>::max();
};

class ComponentTree {
 public:
  explicit ComponentTree(const GrayImage& img) : img_(img), next_pixel_(img.size(), kNone) {
    build();
    finish();
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  int hi(int n) const {
    const Node& node = nodes_[n];
    return node.parent == kNone ? 255 : nodes_[node.parent].level - 1;
  }

  // Area of the component enclosing `n` at threshold `level` (>= n's level).
  int area_above(int n, int level) const {
    while (nodes_[n].parent != kNone && nodes_[nodes_[n].parent].level <= level) n = nodes_[n].parent;
    return nodes_[n].area;
  }

  // Area along the largest-child branch at threshold `level`, 0 when the branch dies out.
  int area_below(int n, int level) const {
    while (n != kNone && nodes_[n].level > level) n = nodes_[n].main_child;
    return n == kNone ? 0 : nodes_[n].area;
  }

  double variation(int n, int level, int delta) const {
    const int plus = area_above(n, level + delta);
    const int minus = area_below(n, level - delta);
    return static_cast<double>(plus - minus) / nodes_[n].area;
  }

  PixelSet pixels(int n) const {
    PixelSet out;
    out.reserve(static_cast<std::size_t>(nodes_[n].area));
    std::vector<int> todo{n};
    while (!todo.empty()) {
      const int cur = todo.back();
      todo.pop_back();
      for (int p = nodes_[cur].own_head; p != kNone; p = next_pixel_[static_cast<std::size_t>(p)]) out.push_back(p);
      for (int c = nodes_[cur].first_child; c != kNone; c = nodes_[c].next_sibling) todo.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int new_node(int level) {
    nodes_.push_back(Node{});
    nodes_.back().level = level;
    return static_cast<int>(nodes_.size()) - 1;
  }

  void merge(int parent, int child) {
    nodes_[parent].area += nodes_[child].area;
    nodes_[child].parent = parent;
    nodes_[child].next_sibling = nodes_[parent].first_child;
    nodes_[parent].first_child = child;
  }

  void accumulate(int n, int pixel) {
    ++nodes_[n].area;
    next_pixel_[static_cast<std::size_t>(pixel)] = nodes_[n].own_head;
    nodes_[n].own_head = pixel;
  }

  // Pops components whose level is below new_level, merging them upward.
  void process_stack(int new_level) {
    do {
      const int top = stack_.back();
      stack_.pop_back();
      if (new_level < nodes_[stack_.back()].level) {
        const int raised = new_node(new_level);
        merge(raised, top);
        stack_.push_back(raised);
        return;
      }
      merge(stack_.back(), top);
    } while (new_level > nodes_[stack_.back()].level);
  }

  void build() {
    const int w = img_.width();
    const int h = img_.height();
    std::vector<std::uint8_t> accessible(img_.size(), 0);
    std::array<std::vector<int>, 256> boundary;
    int priority = 256;

    nodes_.reserve(img_.size() / 4 + 2);
    stack_.push_back(new_node(256));  // sentinel above every grey level

    int cur = 0;
    int edge = 0;
    int level = img_[0];
    accessible[0] = 1;
    stack_.push_back(new_node(level));

    for (;;) {
      const int x = cur % w;
      const int y = cur / w;
      bool descended = false;
      for (; edge < 4; ++edge) {
        int nb = kNone;
        switch (edge) {
          case 0: if (x + 1 < w) nb = cur + 1; break;
          case 1: if (y + 1 < h) nb = cur + w; break;
          case 2: if (x > 0) nb = cur - 1; break;
          default: if (y > 0) nb = cur - w; break;
        }
        if (nb == kNone || accessible[static_cast<std::size_t>(nb)]) continue;
        accessible[static_cast<std::size_t>(nb)] = 1;
        const int nl = img_[static_cast<std::size_t>(nb)];
        if (nl >= level) {
          boundary[static_cast<std::size_t>(nl)].push_back(nb << 3);
          priority = std::min(priority, nl);
        } else {
          // Resume this pixel at its next edge later, descend into the darker one.
          boundary[static_cast<std::size_t>(level)].push_back((cur << 3) | (edge + 1));
          priority = std::min(priority, level);
          cur = nb;
          edge = 0;
          level = nl;
          stack_.push_back(new_node(level));
          descended = true;
          break;
        }
      }
      if (descended) continue;

      accumulate(stack_.back(), cur);

      if (priority == 256) break;
      auto& bucket = boundary[static_cast<std::size_t>(priority)];
      const int code = bucket.back();
      bucket.pop_back();
      cur = code >> 3;
      edge = code & 7;
      while (priority < 256 && boundary[static_cast<std::size_t>(priority)].empty()) ++priority;

      const int nl = img_[static_cast<std::size_t>(cur)];
      if (nl != level) {
        level = nl;
        process_stack(nl);
      }
    }
    root_ = stack_.back();
  }

  void finish() {
    // Post-order: subtree minimum pixel, then the largest child of each node.
    std::vector<int> order;
    order.reserve(nodes_.size());
    std::vector<int> todo{root_};
    while (!todo.empty()) {
      const int n = todo.back();
      todo.pop_back();
      order.push_back(n);
      for (int c = nodes_[n].first_child; c != kNone; c = nodes_[c].next_sibling) todo.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node& node = nodes_[*it];
      for (int p = node.own_head; p != kNone; p = next_pixel_[static_cast<std::size_t>(p)]) {
        node.min_pixel = std::min(node.min_pixel, static_cast<PixelIndex>(p));
      }
      for (int c = node.first_child; c != kNone; c = nodes_[c].next_sibling) {
        const Node& child = nodes_[c];
        node.min_pixel = std::min(node.min_pixel, child.min_pixel);
        if (node.main_child == kNone) {
          node.main_child = c;
          continue;
        }
        const Node& best = nodes_[node.main_child];
        if (child.area > best.area || (child.area == best.area && child.min_pixel < best.min_pixel)) {
          node.main_child = c;
        }
      }
    }
  }

  const GrayImage& img_;
  std::vector<int> next_pixel_;
  std::vector<Node> nodes_;
  std::vector<int> stack_;
  int root_ = kNone;
};

}  // namespace

std::vector<ExtremalRegion> detect_dark_regions(const GrayImage& img, const MserParams& params) {
  params.validate(img.size());
  const ComponentTree tree(img);
  const auto& nodes = tree.nodes();
  const int delta = params.delta;

  std::vector<std::pair<int, double>> stable;  // node, best variation
  for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
    const Node& node = nodes[static_cast<std::size_t>(n)];
    if (node.area == 0 || node.level > 255) continue;  // sentinel
    if (node.area < params.min_area || node.area > params.max_area) continue;

    const int lo = node.level;
    const int top = tree.hi(n);
    double best = kInf;
    double prev = node.main_child == kNone ? kInf : tree.variation(node.main_child, lo - 1, delta);
    double here = tree.variation(n, lo, delta);
    for (int i = lo; i <= top; ++i) {
      double next = kInf;
      if (i < top) {
        next = tree.variation(n, i + 1, delta);
      } else if (node.parent != kNone) {
        next = tree.variation(node.parent, i + 1, delta);
      }
      if (here <= params.max_variation && here <= prev && here <= next) best = std::min(best, here);
      prev = here;
      here = next;
    }
    if (best < kInf) stable.emplace_back(n, best);
  }

  std::vector<ExtremalRegion> out;
  out.reserve(stable.size());
  for (const auto& [n, q] : stable) {
    const Node& node = nodes[static_cast<std::size_t>(n)];
    out.push_back({tree.pixels(n), node.area, q, node.level});
  }
  std::sort(out.begin(), out.end(), [](const ExtremalRegion& a, const ExtremalRegion& b) {
    if (a.seed_level != b.seed_level) return a.seed_level < b.seed_level;
    if (a.size != b.size) return a.size < b.size;
    return a.pixels.front() < b.pixels.front();
  });
  return out;
}

}  // namespace wmi
