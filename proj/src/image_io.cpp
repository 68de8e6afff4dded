#include "lesionlab/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

namespace lesionlab {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

// Rows of interleaved 8-bit samples.
struct RawImage {
  png_uint_32 width = 0, height = 0;
  int channels = 0;
  std::vector<std::vector<unsigned char>> rows;
};

RawImage read_png_raw(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw data_error("cannot open " + path.string());

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw data_error("libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw data_error("undecodable PNG " + path.string());
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  RawImage raw;
  raw.width = width;
  raw.height = height;
  raw.channels = png_get_channels(png, info);
  raw.rows.assign(height,
                  std::vector<unsigned char>(png_get_rowbytes(png, info)));
  std::vector<png_bytep> row_ptrs(height);
  for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = raw.rows[y].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return raw;
}

void write_png_raw(const std::filesystem::path& path, png_uint_32 width,
                   png_uint_32 height, int color_type,
                   std::vector<std::vector<unsigned char>>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw data_error("cannot write " + path.string());

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw data_error("libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw data_error("PNG write failed for " + path.string());
  }

  png_init_io(png, fp.get());
  // Fixed encoder settings keep output byte-identical across runs.
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> row_ptrs(height);
  for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = rows[y].data();
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

int ppm_next_value(std::istream& in, const std::filesystem::path& path) {
  // PPM headers allow '#' comments between tokens.
  for (;;) {
    int c = in.peek();
    if (c == EOF) throw data_error("truncated PPM header " + path.string());
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw data_error("malformed PPM header " + path.string());
  return value;
}

Image load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6')
    throw data_error("not a binary PPM (P6): " + path.string());

  const int width = ppm_next_value(in, path);
  const int height = ppm_next_value(in, path);
  const int maxval = ppm_next_value(in, path);
  if (width < 1 || height < 1 || maxval != 255)
    throw data_error("unsupported PPM (need maxval 255): " + path.string());
  in.get();  // single whitespace before pixel data

  std::vector<unsigned char> data(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size()))
    throw data_error("truncated PPM pixel data " + path.string());

  Image img(height, width);
  std::size_t idx = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.r(y, x) = data[idx++] / 255.0;
      img.g(y, x) = data[idx++] / 255.0;
      img.b(y, x) = data[idx++] / 255.0;
    }
  }
  return img;
}

unsigned char to_byte(double v) {
  const double scaled = v * 255.0;
  const int q = static_cast<int>(scaled + 0.5);
  return static_cast<unsigned char>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  if (!has_png_signature(path)) return load_ppm(path);

  RawImage raw = read_png_raw(path);
  if (raw.width < 1 || raw.height < 1)
    throw data_error("degenerate PNG " + path.string());
  if (raw.channels == 4 || raw.channels == 2)
    std::cerr << "warning: stripping alpha channel from " << path.string()
              << "\n";

  Image img(raw.height, raw.width);
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    const unsigned char* row = raw.rows[y].data();
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      const unsigned char* px = row + static_cast<std::size_t>(x) * raw.channels;
      double r, g, b;
      if (raw.channels >= 3) {
        r = px[0] / 255.0;
        g = px[1] / 255.0;
        b = px[2] / 255.0;
      } else {
        r = g = b = px[0] / 255.0;
      }
      img.r(y, x) = r;
      img.g(y, x) = g;
      img.b(y, x) = b;
    }
  }
  return img;
}

void save_png(const std::filesystem::path& path, const Image& img) {
  const auto h = static_cast<png_uint_32>(img.height());
  const auto w = static_cast<png_uint_32>(img.width());
  std::vector<std::vector<unsigned char>> rows(
      h, std::vector<unsigned char>(static_cast<std::size_t>(w) * 3));
  for (png_uint_32 y = 0; y < h; ++y) {
    for (png_uint_32 x = 0; x < w; ++x) {
      rows[y][3 * x + 0] = to_byte(img.r(y, x));
      rows[y][3 * x + 1] = to_byte(img.g(y, x));
      rows[y][3 * x + 2] = to_byte(img.b(y, x));
    }
  }
  write_png_raw(path, w, h, PNG_COLOR_TYPE_RGB, rows);
}

Mask load_mask(const std::filesystem::path& path) {
  RawImage raw = read_png_raw(path);
  Mask mask(raw.height, raw.width);
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    const unsigned char* row = raw.rows[y].data();
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      // First channel decides; >= 128 means lesion.
      const unsigned char v = row[static_cast<std::size_t>(x) * raw.channels];
      mask.m(y, x) = v >= 128 ? 1 : 0;
    }
  }
  return mask;
}

void save_mask_png(const std::filesystem::path& path, const Mask& mask) {
  const auto h = static_cast<png_uint_32>(mask.height());
  const auto w = static_cast<png_uint_32>(mask.width());
  std::vector<std::vector<unsigned char>> rows(
      h, std::vector<unsigned char>(w));
  for (png_uint_32 y = 0; y < h; ++y)
    for (png_uint_32 x = 0; x < w; ++x)
      rows[y][x] = mask.m(y, x) ? 255 : 0;
  write_png_raw(path, w, h, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace lesionlab
