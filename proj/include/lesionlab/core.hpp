#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace lesionlab {

// One channel plane: rows = image height (y), cols = image width (x).
// All intensities are doubles; 8-bit storage is decoded to [0,1] at load.
using Plane = Eigen::ArrayXXd;
using MaskPlane = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Exit-code families surfaced by the CLI: 2 config, 3 data, 4 pipeline.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct pipeline_error : std::runtime_error {
  explicit pipeline_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A region with no pixels cannot be summarized.
struct empty_region_error : pipeline_error {
  explicit empty_region_error(const std::string& msg) : pipeline_error(msg) {}
};
// A masked region so thin that no co-occurring pixel pair exists. Distinct
// from empty_region_error: the region has pixels, just no valid pairs.
struct no_pairs_error : pipeline_error {
  explicit no_pairs_error(const std::string& msg) : pipeline_error(msg) {}
};

/// True-color raster, three planes with intensities in [0,1].
struct Image {
  Plane r, g, b;

  Image() = default;
  Image(Eigen::Index height, Eigen::Index width)
      : r(Plane::Zero(height, width)),
        g(Plane::Zero(height, width)),
        b(Plane::Zero(height, width)) {}

  Eigen::Index height() const { return r.rows(); }
  Eigen::Index width() const { return r.cols(); }
  Eigen::Index pixels() const { return r.size(); }

  const Plane& channel(int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  Plane& channel(int c) { return c == 0 ? r : (c == 1 ? g : b); }
};

/// Single-plane raster in [0,1].
struct GrayImage {
  Plane v;

  GrayImage() = default;
  explicit GrayImage(Plane p) : v(std::move(p)) {}
  GrayImage(Eigen::Index height, Eigen::Index width)
      : v(Plane::Zero(height, width)) {}

  Eigen::Index height() const { return v.rows(); }
  Eigen::Index width() const { return v.cols(); }
};

/// Binary raster; 1 marks lesion pixels. Dimensions match the annotated image.
struct Mask {
  MaskPlane m;

  Mask() = default;
  explicit Mask(MaskPlane p) : m(std::move(p)) {}
  Mask(Eigen::Index height, Eigen::Index width)
      : m(MaskPlane::Zero(height, width)) {}

  Eigen::Index height() const { return m.rows(); }
  Eigen::Index width() const { return m.cols(); }
  std::int64_t area() const { return m.cast<std::int64_t>().sum(); }
  bool empty() const { return area() == 0; }
};

struct BoundingBox {
  Eigen::Index x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive; empty if x1 < x0

  bool operator==(const BoundingBox&) const = default;
};

inline bool same_shape(const Mask& a, const Mask& b) {
  return a.height() == b.height() && a.width() == b.width();
}

}  // namespace lesionlab
