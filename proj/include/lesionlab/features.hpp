#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

#include "lesionlab/color.hpp"
#include "lesionlab/core.hpp"

namespace lesionlab {

// Fixed feature layout: color moments, then texture, then histogram.
inline constexpr int kColorMomentCount = 72;   // 6 spaces x 3 channels x 4
inline constexpr int kTextureCount = 14;
inline constexpr int kHistogramBins = 4096;    // 16^3 joint RGB bins
inline constexpr int kFeatureDim =
    kColorMomentCount + kTextureCount + kHistogramBins;  // 4182
inline constexpr int kTextureOffset = kColorMomentCount;
inline constexpr int kHistogramOffset = kColorMomentCount + kTextureCount;

using FeatureVector = Eigen::VectorXd;  // length kFeatureDim

/// The skewness of Moment 3 as printed takes the (sign-preserving) cube root
/// of the third central moment; the standard third standardized moment is
/// available behind this switch.
enum class SkewnessMode { CubeRootOfThirdMoment, Standardized };

struct ChannelMoments {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double variance = 0.0;
};

/// Moments of one value sequence: mean, sqrt-of-variance, skewness, variance
/// (population forms, dividing by N). Throws empty_region_error on N = 0.
ChannelMoments channel_moments(
    const std::vector<double>& values,
    SkewnessMode mode = SkewnessMode::CubeRootOfThirdMoment);

/// The 12 color moments of a region in one color space: 3 channels x
/// (mean, stddev, skewness, variance), computed over mask pixels only.
std::array<ChannelMoments, 3> color_moments(
    const Image& img, const Mask& mask, ColorSpace space,
    SkewnessMode mode = SkewnessMode::CubeRootOfThirdMoment);

enum class GlcmOrientation { Deg0 = 0, Deg45, Deg90, Deg135 };

inline constexpr std::array<GlcmOrientation, 4> kAllOrientations = {
    GlcmOrientation::Deg0, GlcmOrientation::Deg45, GlcmOrientation::Deg90,
    GlcmOrientation::Deg135};

/// Pixel offset (dx, dy) for one orientation step at distance d, with y
/// growing downward: 0 deg is horizontal, 90 deg vertical, 45/135 deg the
/// two diagonals.
std::pair<int, int> orientation_offset(GlcmOrientation theta, int distance);

/// Normalized co-occurrence matrix for one (distance, orientation).
struct GlcmMatrix {
  int levels = 0;
  int distance = 1;
  GlcmOrientation theta = GlcmOrientation::Deg0;
  Eigen::ArrayXXd p;  // levels x levels, entries >= 0, sums to 1
};

/// Intensity quantization used by the GLCM: level = min(floor(v*M), M-1).
int quantize_level(double v, int levels);

/// Directed pair counts before symmetrization and normalization: entry (i,j)
/// counts ordered pixel pairs (p, p + offset) with both endpoints in the
/// mask. Throws empty_region_error for an empty mask.
Eigen::ArrayXXd glcm_pair_counts(const GrayImage& gray, const Mask& mask,
                                 int levels, int distance,
                                 GlcmOrientation theta);

/// Symmetrized (counts plus transpose) and normalized-to-sum-1 GLCM.
/// Throws no_pairs_error when the mask admits no co-occurring pair.
GlcmMatrix compute_glcm(const GrayImage& gray, const Mask& mask, int levels,
                        int distance, GlcmOrientation theta);

/// The 14 Haralick descriptors of a normalized GLCM, in the 1973 order:
/// f1 angular second moment, f2 contrast, f3 correlation, f4 sum of squares
/// variance, f5 inverse difference moment, f6 sum average, f7 sum variance,
/// f8 sum entropy, f9 entropy, f10 difference variance, f11 difference
/// entropy, f12/f13 information measures of correlation, f14 maximal
/// correlation coefficient. Entropies are log base 2 with 0*log0 = 0.
/// Correlation-type features that degenerate to 0/0 are set to 0 and
/// flagged.
struct HaralickFeatures {
  std::array<double, 14> f{};
  bool degenerate = false;
};

HaralickFeatures haralick(const GlcmMatrix& glcm);

/// The 14 descriptors averaged over the four orientations.
struct TextureVector {
  std::array<double, 14> values{};
  bool degenerate = false;
};

TextureVector texture_vector(const GrayImage& gray, const Mask& mask,
                             int levels = 32, int distance = 1);

/// Joint 16x16x16 RGB count histogram over mask pixels.
/// Flat index = 256*bR + 16*bG + bB with b = min(floor(16*v), 15).
struct RgbHistogram {
  std::array<std::int64_t, kHistogramBins> counts{};
  std::int64_t total = 0;
};

int histogram_bin(double r, double g, double b);
RgbHistogram rgb_histogram(const Image& img, const Mask& mask);

/// Concatenate the 4182-dim vector: color moments [0,72) ordered space-major
/// (RGB, HSV, YCbCr, YIQ, CIELuv, CIELab) then channel then (mean, stddev,
/// skewness, variance); texture [72,86); histogram [86,4182) stored as
/// proportions count/N so the block is scale-free across region sizes.
FeatureVector assemble(const std::array<std::array<ChannelMoments, 3>, 6>& cm,
                       const TextureVector& tv, const RgbHistogram& hist);

struct FeatureParams {
  int glcm_levels = 32;
  int glcm_distance = 1;
  SkewnessMode skewness = SkewnessMode::CubeRootOfThirdMoment;
};

/// Full extraction for one region of an image.
FeatureVector extract_features(const Image& img, const Mask& mask,
                               const FeatureParams& params = {});

/// Feature standardization fitted on training rows: per-feature z-score with
/// an extra 1/sqrt(block size) weight so the three blocks contribute
/// comparably to Euclidean distances. Features with zero training variance
/// map to 0.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // multiplier applied after centering

  static Standardizer fit(const Eigen::MatrixXd& rows);
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd transform_rows(const Eigen::MatrixXd& rows) const;
};

}  // namespace lesionlab
