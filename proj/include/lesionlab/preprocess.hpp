#pragma once

#include <Eigen/Core>

#include "lesionlab/core.hpp"

namespace lesionlab {

/// Normalized 3x3 Gaussian kernel. Weights sum to 1, the center weight is
/// maximal and the pattern is 4-fold symmetric.
struct GaussianKernel {
  double sigma = 0.85;
  Eigen::Matrix3d weights = Eigen::Matrix3d::Zero();

  static GaussianKernel make(double sigma);
};

/// Binary neighborhood for grayscale morphology. Must contain its origin.
/// The default is the full 3x3 square.
struct StructuringElement {
  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> pattern;

  static StructuringElement square(int size = 3);
  int radius_y() const { return static_cast<int>(pattern.rows()) / 2; }
  int radius_x() const { return static_cast<int>(pattern.cols()) / 2; }
  bool empty() const { return pattern.size() == 0 || pattern.maxCoeff() == 0; }
};

/// Convolve each channel with the normalized 3x3 Gaussian; borders handled by
/// edge replication. Output stays in [0,1] (the kernel is a convex
/// combination). Throws std::invalid_argument for sigma <= 0.
Image gaussian_smooth(const Image& img, double sigma);
Plane gaussian_smooth(const Plane& plane, double sigma);

/// Grayscale morphology: neighborhood minimum (erode) or maximum (dilate)
/// under the structuring element, borders by edge replication. Throws
/// std::invalid_argument for an empty element.
GrayImage morph_erode(const GrayImage& gray, const StructuringElement& se);
GrayImage morph_dilate(const GrayImage& gray, const StructuringElement& se);
Plane morph_erode(const Plane& plane, const StructuringElement& se);
Plane morph_dilate(const Plane& plane, const StructuringElement& se);

enum class MorphOrder { ErodeThenDilate, DilateThenErode };

/// The full noise/hair suppression step: Gaussian smoothing then per-channel
/// erosion and dilation (an opening by default, removing thin dark strokes).
Image preprocess_image(const Image& img, double sigma,
                       const StructuringElement& se,
                       MorphOrder order = MorphOrder::ErodeThenDilate);

}  // namespace lesionlab
