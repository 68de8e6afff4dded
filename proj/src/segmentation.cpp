#include "lesionlab/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

namespace lesionlab {
namespace {

constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

struct Component {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pixels;  // (y, x)
  BoundingBox bbox;
};

std::vector<Component> find_components(const MaskPlane& m, int connectivity) {
  const Eigen::Index h = m.rows();
  const Eigen::Index w = m.cols();
  const int ndirs = connectivity == 4 ? 4 : 8;
  MaskPlane visited = MaskPlane::Zero(h, w);
  std::vector<Component> comps;

  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      if (!m(y, x) || visited(y, x)) continue;
      Component comp;
      comp.bbox = {x, y, x, y};
      std::queue<std::pair<Eigen::Index, Eigen::Index>> frontier;
      frontier.push({y, x});
      visited(y, x) = 1;
      while (!frontier.empty()) {
        auto [cy, cx] = frontier.front();
        frontier.pop();
        comp.pixels.emplace_back(cy, cx);
        comp.bbox.x0 = std::min(comp.bbox.x0, cx);
        comp.bbox.x1 = std::max(comp.bbox.x1, cx);
        comp.bbox.y0 = std::min(comp.bbox.y0, cy);
        comp.bbox.y1 = std::max(comp.bbox.y1, cy);
        for (int d = 0; d < ndirs; ++d) {
          const Eigen::Index ny = cy + kDy8[d];
          const Eigen::Index nx = cx + kDx8[d];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          if (!m(ny, nx) || visited(ny, nx)) continue;
          visited(ny, nx) = 1;
          frontier.push({ny, nx});
        }
      }
      comps.push_back(std::move(comp));
    }
  }
  return comps;
}

}  // namespace

std::vector<Mask> connected_components(const Mask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw std::invalid_argument("connectivity must be 4 or 8");
  std::vector<Mask> out;
  for (const Component& comp : find_components(mask.m, connectivity)) {
    Mask m(mask.height(), mask.width());
    for (auto [y, x] : comp.pixels) m.m(y, x) = 1;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Seed> select_seeds(const GrayImage& gray, std::int64_t min_area,
                               double percentile) {
  if (!(percentile >= 0.0 && percentile <= 1.0))
    throw std::invalid_argument("seed percentile must be in [0,1]");
  const Eigen::Index h = gray.height();
  const Eigen::Index w = gray.width();
  const Eigen::Index n = h * w;
  if (n == 0) return {};

  std::vector<double> sorted(gray.v.data(), gray.v.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::floor(percentile * static_cast<double>(n - 1)));
  const double threshold = sorted[rank];
  const double global_max = sorted.back();

  // Pixels at the global maximum are background by construction; excluding
  // them makes a uniform image produce no candidates.
  MaskPlane candidates = MaskPlane::Zero(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      candidates(y, x) =
          (gray.v(y, x) <= threshold && gray.v(y, x) < global_max) ? 1 : 0;

  std::vector<Component> comps = find_components(candidates, 8);
  std::sort(comps.begin(), comps.end(), [](const Component& a,
                                           const Component& b) {
    return std::tie(a.bbox.y0, a.bbox.x0) < std::tie(b.bbox.y0, b.bbox.x0);
  });

  std::vector<Seed> seeds;
  for (const Component& comp : comps) {
    if (static_cast<std::int64_t>(comp.pixels.size()) < min_area) continue;
    double sum_y = 0.0, sum_x = 0.0;
    for (auto [y, x] : comp.pixels) {
      sum_y += static_cast<double>(y);
      sum_x += static_cast<double>(x);
    }
    const auto cy = static_cast<Eigen::Index>(
        std::llround(sum_y / static_cast<double>(comp.pixels.size())));
    const auto cx = static_cast<Eigen::Index>(
        std::llround(sum_x / static_cast<double>(comp.pixels.size())));

    const bool centroid_inside =
        std::find(comp.pixels.begin(), comp.pixels.end(),
                  std::make_pair(cy, cx)) != comp.pixels.end();
    if (centroid_inside) {
      seeds.push_back({cx, cy});
    } else {
      // Snap to the darkest pixel; ties resolved by (y, x) scan order.
      auto darkest = comp.pixels.front();
      double darkest_v = gray.v(darkest.first, darkest.second);
      for (auto [y, x] : comp.pixels) {
        const double v = gray.v(y, x);
        if (v < darkest_v ||
            (v == darkest_v && std::tie(y, x) < std::tie(darkest.first,
                                                         darkest.second))) {
          darkest = {y, x};
          darkest_v = v;
        }
      }
      seeds.push_back({darkest.second, darkest.first});
    }
  }
  return seeds;
}

Mask region_grow(const GrayImage& gray, Seed seed, const GrowParams& params) {
  const Eigen::Index h = gray.height();
  const Eigen::Index w = gray.width();
  if (seed.x < 0 || seed.x >= w || seed.y < 0 || seed.y >= h)
    throw std::invalid_argument("seed out of image bounds");
  if (params.tolerance < 0.0)
    throw std::invalid_argument("tolerance must be nonnegative");
  if (params.connectivity != 4 && params.connectivity != 8)
    throw std::invalid_argument("connectivity must be 4 or 8");

  const int ndirs = params.connectivity == 4 ? 4 : 8;
  Mask mask(h, w);
  mask.m(seed.y, seed.x) = 1;

  if (params.reference == GrowReference::SeedValue) {
    const double ref = gray.v(seed.y, seed.x);
    std::queue<std::pair<Eigen::Index, Eigen::Index>> frontier;
    frontier.push({seed.y, seed.x});
    while (!frontier.empty()) {
      auto [cy, cx] = frontier.front();
      frontier.pop();
      for (int d = 0; d < ndirs; ++d) {
        const Eigen::Index ny = cy + kDy8[d];
        const Eigen::Index nx = cx + kDx8[d];
        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
        if (mask.m(ny, nx)) continue;
        if (std::abs(gray.v(ny, nx) - ref) > params.tolerance) continue;
        mask.m(ny, nx) = 1;
        frontier.push({ny, nx});
      }
    }
    return mask;
  }

  // Running-mean reference is admission-order dependent; a lexicographic
  // (y, x) frontier pins one deterministic order.
  std::set<std::pair<Eigen::Index, Eigen::Index>> frontier;
  double sum = gray.v(seed.y, seed.x);
  std::int64_t count = 1;
  auto push_neighbors = [&](Eigen::Index cy, Eigen::Index cx) {
    for (int d = 0; d < ndirs; ++d) {
      const Eigen::Index ny = cy + kDy8[d];
      const Eigen::Index nx = cx + kDx8[d];
      if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
      if (mask.m(ny, nx)) continue;
      frontier.insert({ny, nx});
    }
  };
  push_neighbors(seed.y, seed.x);
  while (!frontier.empty()) {
    bool admitted_any = false;
    for (auto it = frontier.begin(); it != frontier.end();) {
      const auto [cy, cx] = *it;
      const double ref = sum / static_cast<double>(count);
      if (std::abs(gray.v(cy, cx) - ref) <= params.tolerance) {
        it = frontier.erase(it);
        mask.m(cy, cx) = 1;
        sum += gray.v(cy, cx);
        ++count;
        push_neighbors(cy, cx);
        admitted_any = true;
        // Restart the scan: the mean moved, earlier rejects may now pass.
        break;
      }
      ++it;
    }
    if (!admitted_any) break;
  }
  return mask;
}

std::vector<LesionRegion> extract_regions(const std::vector<Mask>& masks,
                                          std::int64_t min_area,
                                          const std::string& image_id,
                                          const std::vector<Seed>& seeds) {
  std::vector<LesionRegion> regions;
  if (masks.empty()) return regions;

  const Eigen::Index h = masks.front().height();
  const Eigen::Index w = masks.front().width();
  Mask merged(h, w);
  for (const Mask& m : masks) {
    if (m.height() != h || m.width() != w)
      throw data_error("masks passed to extract_regions differ in size");
    merged.m = merged.m.max(m.m);
  }

  std::vector<Component> comps = find_components(merged.m, 8);
  std::sort(comps.begin(), comps.end(), [](const Component& a,
                                           const Component& b) {
    return std::tie(a.bbox.y0, a.bbox.x0, a.bbox.y1, a.bbox.x1) <
           std::tie(b.bbox.y0, b.bbox.x0, b.bbox.y1, b.bbox.x1);
  });

  int next_id = 0;
  for (const Component& comp : comps) {
    if (static_cast<std::int64_t>(comp.pixels.size()) < min_area) continue;
    LesionRegion region;
    region.mask = Mask(h, w);
    for (auto [y, x] : comp.pixels) region.mask.m(y, x) = 1;
    region.area = static_cast<std::int64_t>(comp.pixels.size());
    region.bbox = comp.bbox;
    region.image_id = image_id;
    region.region_id = next_id++;
    for (const Seed& s : seeds) {
      if (region.mask.m(s.y, s.x)) {
        region.seed = s;
        break;
      }
    }
    regions.push_back(std::move(region));
  }
  return regions;
}

}  // namespace lesionlab
