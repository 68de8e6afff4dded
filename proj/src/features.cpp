#include "lesionlab/features.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lesionlab {
namespace {

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

std::vector<double> masked_values(const Plane& plane, const Mask& mask) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(mask.area()));
  for (Eigen::Index y = 0; y < plane.rows(); ++y)
    for (Eigen::Index x = 0; x < plane.cols(); ++x)
      if (mask.m(y, x)) values.push_back(plane(y, x));
  return values;
}

}  // namespace

ChannelMoments channel_moments(const std::vector<double>& values,
                               SkewnessMode mode) {
  if (values.empty())
    throw empty_region_error("cannot compute moments of an empty region");
  const double n = static_cast<double>(values.size());

  ChannelMoments m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / n;

  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;

  m.variance = m2;
  m.stddev = std::sqrt(m2);
  if (mode == SkewnessMode::CubeRootOfThirdMoment) {
    m.skewness = std::cbrt(m3);
  } else {
    m.skewness = m.stddev > 0.0 ? m3 / (m2 * m.stddev) : 0.0;
  }
  return m;
}

std::array<ChannelMoments, 3> color_moments(const Image& img, const Mask& mask,
                                            ColorSpace space,
                                            SkewnessMode mode) {
  if (img.height() != mask.height() || img.width() != mask.width())
    throw data_error("image and mask dimensions differ");
  const std::array<Plane, 3> planes = convert(img, space);
  std::array<ChannelMoments, 3> out;
  for (int c = 0; c < 3; ++c)
    out[c] = channel_moments(masked_values(planes[c], mask), mode);
  return out;
}

std::pair<int, int> orientation_offset(GlcmOrientation theta, int distance) {
  switch (theta) {
    case GlcmOrientation::Deg0: return {distance, 0};
    case GlcmOrientation::Deg45: return {distance, -distance};
    case GlcmOrientation::Deg90: return {0, -distance};
    case GlcmOrientation::Deg135: return {-distance, -distance};
  }
  return {distance, 0};
}

int quantize_level(double v, int levels) {
  const int q = static_cast<int>(v * levels);
  return q >= levels ? levels - 1 : (q < 0 ? 0 : q);
}

Eigen::ArrayXXd glcm_pair_counts(const GrayImage& gray, const Mask& mask,
                                 int levels, int distance,
                                 GlcmOrientation theta) {
  if (levels < 2) throw std::invalid_argument("GLCM needs at least 2 levels");
  if (distance < 1) throw std::invalid_argument("GLCM distance must be >= 1");
  if (gray.height() != mask.height() || gray.width() != mask.width())
    throw data_error("image and mask dimensions differ");
  if (mask.empty())
    throw empty_region_error("cannot compute a GLCM of an empty region");

  const auto [dx, dy] = orientation_offset(theta, distance);
  const Eigen::Index h = gray.height();
  const Eigen::Index w = gray.width();
  Eigen::ArrayXXd counts = Eigen::ArrayXXd::Zero(levels, levels);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      if (!mask.m(y, x)) continue;
      const Eigen::Index ny = y + dy;
      const Eigen::Index nx = x + dx;
      if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
      if (!mask.m(ny, nx)) continue;
      const int i = quantize_level(gray.v(y, x), levels);
      const int j = quantize_level(gray.v(ny, nx), levels);
      counts(i, j) += 1.0;
    }
  }
  return counts;
}

GlcmMatrix compute_glcm(const GrayImage& gray, const Mask& mask, int levels,
                        int distance, GlcmOrientation theta) {
  Eigen::ArrayXXd counts = glcm_pair_counts(gray, mask, levels, distance, theta);
  Eigen::ArrayXXd sym = counts + counts.transpose().eval();
  const double total = sym.sum();
  if (total <= 0.0)
    throw no_pairs_error("mask admits no co-occurring pixel pair");
  GlcmMatrix glcm;
  glcm.levels = levels;
  glcm.distance = distance;
  glcm.theta = theta;
  glcm.p = sym / total;
  return glcm;
}

HaralickFeatures haralick(const GlcmMatrix& glcm) {
  const Eigen::ArrayXXd& p = glcm.p;
  const int m = glcm.levels;
  HaralickFeatures out;

  Eigen::ArrayXd px = p.rowwise().sum();
  Eigen::ArrayXd py = p.colwise().sum();

  double mu_x = 0.0, mu_y = 0.0;
  for (int i = 0; i < m; ++i) {
    mu_x += i * px(i);
    mu_y += i * py(i);
  }
  double var_x = 0.0, var_y = 0.0;
  for (int i = 0; i < m; ++i) {
    var_x += (i - mu_x) * (i - mu_x) * px(i);
    var_y += (i - mu_y) * (i - mu_y) * py(i);
  }
  const double sigma_x = std::sqrt(var_x);
  const double sigma_y = std::sqrt(var_y);

  Eigen::ArrayXd p_sum = Eigen::ArrayXd::Zero(2 * m - 1);   // i + j
  Eigen::ArrayXd p_diff = Eigen::ArrayXd::Zero(m);          // |i - j|
  double asm_ = 0.0, idm = 0.0, entropy = 0.0, cross = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double v = p(i, j);
      if (v == 0.0) continue;
      p_sum(i + j) += v;
      p_diff(std::abs(i - j)) += v;
      asm_ += v * v;
      idm += v / (1.0 + (i - j) * (i - j));
      entropy -= v * log2_safe(v);
      cross += static_cast<double>(i) * j * v;
    }
  }

  double contrast = 0.0;
  for (int k = 0; k < m; ++k) contrast += static_cast<double>(k) * k * p_diff(k);

  double sum_avg = 0.0, sum_entropy = 0.0;
  for (int k = 0; k < 2 * m - 1; ++k) {
    sum_avg += k * p_sum(k);
    sum_entropy -= p_sum(k) * log2_safe(p_sum(k));
  }
  double sum_var = 0.0;
  for (int k = 0; k < 2 * m - 1; ++k)
    sum_var += (k - sum_avg) * (k - sum_avg) * p_sum(k);

  double diff_avg = 0.0, diff_entropy = 0.0;
  for (int k = 0; k < m; ++k) {
    diff_avg += k * p_diff(k);
    diff_entropy -= p_diff(k) * log2_safe(p_diff(k));
  }
  double diff_var = 0.0;
  for (int k = 0; k < m; ++k)
    diff_var += (k - diff_avg) * (k - diff_avg) * p_diff(k);

  double hx = 0.0, hy = 0.0;
  for (int i = 0; i < m; ++i) {
    hx -= px(i) * log2_safe(px(i));
    hy -= py(i) * log2_safe(py(i));
  }
  double hxy1 = 0.0, hxy2 = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double marg = px(i) * py(j);
      if (marg > 0.0) hxy2 -= marg * std::log2(marg);
      if (p(i, j) > 0.0) hxy1 -= p(i, j) * std::log2(marg);
    }
  }

  out.f[0] = asm_;
  out.f[1] = contrast;
  if (sigma_x > 0.0 && sigma_y > 0.0) {
    out.f[2] = (cross - mu_x * mu_y) / (sigma_x * sigma_y);
  } else {
    out.f[2] = 0.0;
    out.degenerate = true;
  }
  double sum_sq = 0.0;  // variance about mu_x, summed over the whole matrix
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sum_sq += (i - mu_x) * (i - mu_x) * p(i, j);
  out.f[3] = sum_sq;
  out.f[4] = idm;
  out.f[5] = sum_avg;
  out.f[6] = sum_var;
  out.f[7] = sum_entropy;
  out.f[8] = entropy;
  out.f[9] = diff_var;
  out.f[10] = diff_entropy;
  const double hmax = std::max(hx, hy);
  if (hmax > 0.0) {
    out.f[11] = (entropy - hxy1) / hmax;
  } else {
    out.f[11] = 0.0;
    out.degenerate = true;
  }
  const double inner = 1.0 - std::exp(-2.0 * (hxy2 - entropy));
  out.f[12] = inner > 0.0 ? std::sqrt(inner) : 0.0;

  // f14: sqrt of the second largest eigenvalue of
  //   Q(i,j) = sum_k p(i,k) p(j,k) / (px(i) py(k)),
  // restricted to levels with nonzero marginals.
  std::vector<int> live;
  for (int i = 0; i < m; ++i)
    if (px(i) > 0.0 && py(i) > 0.0) live.push_back(i);
  if (live.size() < 2) {
    out.f[13] = 0.0;
    out.degenerate = true;
  } else {
    const int n = static_cast<int>(live.size());
    Eigen::MatrixXd q(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
          acc += p(live[a], live[c]) * p(live[b], live[c]) /
                 (px(live[a]) * py(live[c]));
        }
        q(a, b) = acc;
      }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(q, /*computeEigenvectors=*/false);
    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = solver.eigenvalues()(i).real();
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    out.f[13] = eigs[1] > 0.0 ? std::sqrt(eigs[1]) : 0.0;
  }
  return out;
}

TextureVector texture_vector(const GrayImage& gray, const Mask& mask,
                             int levels, int distance) {
  TextureVector tv;
  for (GlcmOrientation theta : kAllOrientations) {
    const HaralickFeatures h =
        haralick(compute_glcm(gray, mask, levels, distance, theta));
    for (int i = 0; i < 14; ++i) tv.values[i] += h.f[i];
    tv.degenerate = tv.degenerate || h.degenerate;
  }
  for (int i = 0; i < 14; ++i) tv.values[i] /= 4.0;
  return tv;
}

int histogram_bin(double r, double g, double b) {
  const auto bin = [](double v) {
    const int q = static_cast<int>(v * 16.0);
    return q >= 16 ? 15 : (q < 0 ? 0 : q);
  };
  return 256 * bin(r) + 16 * bin(g) + bin(b);
}

RgbHistogram rgb_histogram(const Image& img, const Mask& mask) {
  if (img.height() != mask.height() || img.width() != mask.width())
    throw data_error("image and mask dimensions differ");
  RgbHistogram hist;
  for (Eigen::Index y = 0; y < img.height(); ++y) {
    for (Eigen::Index x = 0; x < img.width(); ++x) {
      if (!mask.m(y, x)) continue;
      ++hist.counts[static_cast<std::size_t>(
          histogram_bin(img.r(y, x), img.g(y, x), img.b(y, x)))];
      ++hist.total;
    }
  }
  if (hist.total == 0)
    throw empty_region_error("cannot histogram an empty region");
  return hist;
}

FeatureVector assemble(const std::array<std::array<ChannelMoments, 3>, 6>& cm,
                       const TextureVector& tv, const RgbHistogram& hist) {
  FeatureVector v(kFeatureDim);
  int idx = 0;
  for (const auto& space : cm) {
    for (const auto& channel : space) {
      v(idx++) = channel.mean;
      v(idx++) = channel.stddev;
      v(idx++) = channel.skewness;
      v(idx++) = channel.variance;
    }
  }
  for (double t : tv.values) v(idx++) = t;
  const double n = static_cast<double>(hist.total);
  for (std::int64_t c : hist.counts) v(idx++) = static_cast<double>(c) / n;
  return v;
}

FeatureVector extract_features(const Image& img, const Mask& mask,
                               const FeatureParams& params) {
  std::array<std::array<ChannelMoments, 3>, 6> cm;
  for (std::size_t s = 0; s < kAllColorSpaces.size(); ++s)
    cm[s] = color_moments(img, mask, kAllColorSpaces[s], params.skewness);
  const TextureVector tv = texture_vector(to_gray(img), mask,
                                          params.glcm_levels,
                                          params.glcm_distance);
  return assemble(cm, tv, rgb_histogram(img, mask));
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw data_error("cannot fit standardizer on no rows");
  Standardizer st;
  st.mean = rows.colwise().mean();
  Eigen::VectorXd var = (rows.rowwise() - st.mean.transpose())
                            .array()
                            .square()
                            .colwise()
                            .mean();
  st.scale.resize(rows.cols());
  for (Eigen::Index i = 0; i < rows.cols(); ++i) {
    double block = kHistogramBins;
    if (i < kTextureOffset) {
      block = kColorMomentCount;
    } else if (i < kHistogramOffset) {
      block = kTextureCount;
    }
    const double sd = std::sqrt(var(i));
    st.scale(i) = sd > 0.0 ? 1.0 / (sd * std::sqrt(block)) : 0.0;
  }
  return st;
}

Eigen::VectorXd Standardizer::transform(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size())
    throw data_error("feature dimension mismatch in standardizer");
  return ((x - mean).array() * scale.array()).matrix();
}

Eigen::MatrixXd Standardizer::transform_rows(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out = rows.rowwise() - mean.transpose();
  out.array().rowwise() *= scale.transpose().array();
  return out;
}

}  // namespace lesionlab
