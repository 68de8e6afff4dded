#pragma once

#include <filesystem>

#include "lesionlab/core.hpp"

namespace lesionlab {

/// Decode a PNG or binary PPM (P6) file into an 8-bit-quantized Image with
/// intensities v/255 in [0,1]. 16-bit PNGs are reduced to 8 bits, palette and
/// gray images expanded to RGB, and an alpha channel is stripped with a
/// warning on stderr. Throws data_error on unreadable or malformed files.
Image load_image(const std::filesystem::path& path);

/// Encode an Image as an 8-bit RGB PNG (round(v*255) per channel).
void save_png(const std::filesystem::path& path, const Image& img);

/// Read a single-channel mask PNG; pixel values >= 128 mean lesion.
Mask load_mask(const std::filesystem::path& path);

/// Write a mask as a single-channel PNG with values {0, 255}.
void save_mask_png(const std::filesystem::path& path, const Mask& mask);

}  // namespace lesionlab
