#include "lesionlab/preprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace lesionlab {

GaussianKernel GaussianKernel::make(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian sigma must be positive");
  GaussianKernel k;
  k.sigma = sigma;
  double sum = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const double w =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k.weights(dy + 1, dx + 1) = w;
      sum += w;
    }
  }
  k.weights /= sum;
  return k;
}

StructuringElement StructuringElement::square(int size) {
  if (size < 1 || size % 2 == 0)
    throw std::invalid_argument("structuring element size must be odd and >= 1");
  StructuringElement se;
  se.pattern.setConstant(size, size, 1);
  return se;
}

namespace {

inline Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

}  // namespace

Plane gaussian_smooth(const Plane& plane, double sigma) {
  const GaussianKernel kernel = GaussianKernel::make(sigma);
  const Eigen::Index h = plane.rows();
  const Eigen::Index w = plane.cols();
  Plane out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const Eigen::Index sy = clamp_index(y + dy, h);
        for (int dx = -1; dx <= 1; ++dx) {
          const Eigen::Index sx = clamp_index(x + dx, w);
          acc += kernel.weights(dy + 1, dx + 1) * plane(sy, sx);
        }
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Image gaussian_smooth(const Image& img, double sigma) {
  Image out;
  out.r = gaussian_smooth(img.r, sigma);
  out.g = gaussian_smooth(img.g, sigma);
  out.b = gaussian_smooth(img.b, sigma);
  return out;
}

namespace {

template <bool kErode>
Plane morph_apply(const Plane& plane, const StructuringElement& se) {
  if (se.empty())
    throw std::invalid_argument("structuring element must be nonempty");
  const Eigen::Index h = plane.rows();
  const Eigen::Index w = plane.cols();
  const int ry = se.radius_y();
  const int rx = se.radius_x();
  if (!se.pattern(ry, rx))
    throw std::invalid_argument("structuring element must contain its origin");
  Plane out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      double best = plane(y, x);
      for (int dy = -ry; dy <= ry; ++dy) {
        const Eigen::Index sy = clamp_index(y + dy, h);
        for (int dx = -rx; dx <= rx; ++dx) {
          if (!se.pattern(dy + ry, dx + rx)) continue;
          const double v = plane(sy, clamp_index(x + dx, w));
          if constexpr (kErode) {
            if (v < best) best = v;
          } else {
            if (v > best) best = v;
          }
        }
      }
      out(y, x) = best;
    }
  }
  return out;
}

}  // namespace

Plane morph_erode(const Plane& plane, const StructuringElement& se) {
  return morph_apply<true>(plane, se);
}

Plane morph_dilate(const Plane& plane, const StructuringElement& se) {
  return morph_apply<false>(plane, se);
}

GrayImage morph_erode(const GrayImage& gray, const StructuringElement& se) {
  return GrayImage(morph_erode(gray.v, se));
}

GrayImage morph_dilate(const GrayImage& gray, const StructuringElement& se) {
  return GrayImage(morph_dilate(gray.v, se));
}

Image preprocess_image(const Image& img, double sigma,
                       const StructuringElement& se, MorphOrder order) {
  Image out = gaussian_smooth(img, sigma);
  for (int c = 0; c < 3; ++c) {
    Plane& plane = out.channel(c);
    if (order == MorphOrder::ErodeThenDilate) {
      plane = morph_dilate(morph_erode(plane, se), se);
    } else {
      plane = morph_erode(morph_dilate(plane, se), se);
    }
  }
  return out;
}

}  // namespace lesionlab
