#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lesionlab/core.hpp"

namespace lesionlab {

/// Starting pixel for region growing.
struct Seed {
  Eigen::Index x = 0;
  Eigen::Index y = 0;

  bool operator==(const Seed&) const = default;
};

enum class GrowReference { SeedValue, RunningMean };

struct GrowParams {
  double tolerance = 0.12;  // intensity delta in [0,1]
  int connectivity = 8;     // 4 or 8
  GrowReference reference = GrowReference::SeedValue;
};

/// One connected segmented lesion; the unit of classification. One image may
/// yield several regions.
struct LesionRegion {
  Mask mask;
  std::int64_t area = 0;
  BoundingBox bbox;
  std::string image_id;
  int region_id = 0;
  Seed seed;  // first seed that landed inside the region
};

/// Automatic seed selection: threshold the image at the given dark percentile
/// (default the 10th), take 8-connected components of the below-threshold
/// set, drop components smaller than min_area, and return one seed per
/// component at its centroid (snapped to the component's darkest pixel when
/// the centroid falls outside it). Pixels at the global maximum intensity are
/// never candidates, so a uniform image yields no seeds. Deterministic:
/// seeds are ordered by their component's (top, left) bounding box corner.
std::vector<Seed> select_seeds(const GrayImage& gray, std::int64_t min_area,
                               double percentile = 0.10);

/// Grow a region from the seed: the connectivity-connected set of pixels
/// reachable from it whose intensity differs from the reference by at most
/// params.tolerance. The reference is fixed at the seed's value by default;
/// RunningMean tracks the mean of admitted pixels and expands the frontier in
/// lexicographic (y, x) order so the result stays deterministic.
Mask region_grow(const GrayImage& gray, Seed seed, const GrowParams& params);

/// Union all grown masks, split into 8-connected components, drop components
/// with area < min_area, and assign region ids ordered by (top, left) of the
/// bounding box. Seeds are attached to the first listed seed inside each
/// region, when provided.
std::vector<LesionRegion> extract_regions(const std::vector<Mask>& masks,
                                          std::int64_t min_area,
                                          const std::string& image_id = "",
                                          const std::vector<Seed>& seeds = {});

/// 8- or 4-connected components of the nonzero pixels; each returned mask is
/// one component. Shared by seeding, region extraction and the evaluation
/// suites.
std::vector<Mask> connected_components(const Mask& mask, int connectivity = 8);

}  // namespace lesionlab
