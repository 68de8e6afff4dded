#pragma once

#include <array>
#include <string>

#include "lesionlab/core.hpp"

namespace lesionlab {

/// The six color spaces features are drawn from. YIQ is the NTSC space.
enum class ColorSpace { RGB = 0, HSV, YCbCr, YIQ, CIELuv, CIELab };

inline constexpr std::array<ColorSpace, 6> kAllColorSpaces = {
    ColorSpace::RGB,  ColorSpace::HSV,    ColorSpace::YCbCr,
    ColorSpace::YIQ,  ColorSpace::CIELuv, ColorSpace::CIELab};

std::string to_string(ColorSpace space);
std::array<std::string, 3> channel_names(ColorSpace space);

/// Convert an RGB image (channels in [0,1]) into three real-valued planes of
/// the target space. RGB is the identity. YCbCr and YIQ use the BT.601
/// matrices (YCbCr full-range with chroma offset +0.5). CIELab/CIELuv go
/// through sRGB-linearized CIE XYZ with the D65/2-degree white point. HSV hue
/// is in degrees [0,360); achromatic pixels get h = 0, s = 0 by convention.
std::array<Plane, 3> convert(const Image& img, ColorSpace target);

/// Inverse of convert(); used to validate round trips. Out-of-gamut results
/// are clamped back to [0,1].
Image convert_from(const std::array<Plane, 3>& planes, ColorSpace source);

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B, clamped to [0,1].
GrayImage to_gray(const Image& img);

}  // namespace lesionlab
