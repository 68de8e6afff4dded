#include "lesionlab/color.hpp"

#include <cmath>

namespace lesionlab {
namespace {

// D65/2-degree reference white for the CIE spaces.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

constexpr double kLabEps = 216.0 / 24389.0;   // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;  // (29/3)^3

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c
                        : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

void rgb_to_xyz(double r, double g, double b, double& x, double& y,
                double& z) {
  const double rl = srgb_to_linear(r);
  const double gl = srgb_to_linear(g);
  const double bl = srgb_to_linear(b);
  x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
  y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
  z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
}

void xyz_to_rgb(double x, double y, double z, double& r, double& g,
                double& b) {
  const double rl = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double gl = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double bl = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  r = linear_to_srgb(rl);
  g = linear_to_srgb(gl);
  b = linear_to_srgb(bl);
}

double lab_f(double t) {
  return t > kLabEps ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double ft) {
  const double t3 = ft * ft * ft;
  return t3 > kLabEps ? t3 : (116.0 * ft - 16.0) / kLabKappa;
}

// u'v' chromaticity of the white point.
const double kUn = 4.0 * kXn / (kXn + 15.0 * kYn + 3.0 * kZn);
const double kVn = 9.0 * kYn / (kXn + 15.0 * kYn + 3.0 * kZn);

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

std::string to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::RGB: return "rgb";
    case ColorSpace::HSV: return "hsv";
    case ColorSpace::YCbCr: return "ycbcr";
    case ColorSpace::YIQ: return "yiq";
    case ColorSpace::CIELuv: return "luv";
    case ColorSpace::CIELab: return "lab";
  }
  return "rgb";
}

std::array<std::string, 3> channel_names(ColorSpace space) {
  switch (space) {
    case ColorSpace::RGB: return {"r", "g", "b"};
    case ColorSpace::HSV: return {"h", "s", "v"};
    case ColorSpace::YCbCr: return {"y", "cb", "cr"};
    case ColorSpace::YIQ: return {"y", "i", "q"};
    case ColorSpace::CIELuv: return {"l", "u", "v"};
    case ColorSpace::CIELab: return {"l", "a", "b"};
  }
  return {"c0", "c1", "c2"};
}

std::array<Plane, 3> convert(const Image& img, ColorSpace target) {
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();

  switch (target) {
    case ColorSpace::RGB:
      return {img.r, img.g, img.b};

    case ColorSpace::YCbCr: {
      Plane y = 0.299 * img.r + 0.587 * img.g + 0.114 * img.b;
      Plane cb = -0.168735892 * img.r - 0.331264108 * img.g + 0.5 * img.b + 0.5;
      Plane cr = 0.5 * img.r - 0.418687589 * img.g - 0.081312411 * img.b + 0.5;
      return {std::move(y), std::move(cb), std::move(cr)};
    }

    case ColorSpace::YIQ: {
      Plane y = 0.299 * img.r + 0.587 * img.g + 0.114 * img.b;
      Plane i = 0.595716 * img.r - 0.274453 * img.g - 0.321263 * img.b;
      Plane q = 0.211456 * img.r - 0.522591 * img.g + 0.311135 * img.b;
      return {std::move(y), std::move(i), std::move(q)};
    }

    case ColorSpace::HSV: {
      std::array<Plane, 3> out = {Plane(h, w), Plane(h, w), Plane(h, w)};
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          const double r = img.r(yy, xx), g = img.g(yy, xx), b = img.b(yy, xx);
          const double maxc = std::max({r, g, b});
          const double minc = std::min({r, g, b});
          const double delta = maxc - minc;
          double hue = 0.0;
          if (delta > 0.0) {
            if (maxc == r) {
              hue = 60.0 * std::fmod((g - b) / delta, 6.0);
            } else if (maxc == g) {
              hue = 60.0 * ((b - r) / delta + 2.0);
            } else {
              hue = 60.0 * ((r - g) / delta + 4.0);
            }
            if (hue < 0.0) hue += 360.0;
            if (hue >= 360.0) hue -= 360.0;
          }
          out[0](yy, xx) = hue;
          out[1](yy, xx) = maxc > 0.0 ? delta / maxc : 0.0;
          out[2](yy, xx) = maxc;
        }
      }
      return out;
    }

    case ColorSpace::CIELab: {
      std::array<Plane, 3> out = {Plane(h, w), Plane(h, w), Plane(h, w)};
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          double x, y, z;
          rgb_to_xyz(img.r(yy, xx), img.g(yy, xx), img.b(yy, xx), x, y, z);
          const double fx = lab_f(x / kXn);
          const double fy = lab_f(y / kYn);
          const double fz = lab_f(z / kZn);
          out[0](yy, xx) = 116.0 * fy - 16.0;
          out[1](yy, xx) = 500.0 * (fx - fy);
          out[2](yy, xx) = 200.0 * (fy - fz);
        }
      }
      return out;
    }

    case ColorSpace::CIELuv: {
      std::array<Plane, 3> out = {Plane(h, w), Plane(h, w), Plane(h, w)};
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          double x, y, z;
          rgb_to_xyz(img.r(yy, xx), img.g(yy, xx), img.b(yy, xx), x, y, z);
          const double yr = y / kYn;
          const double l =
              yr > kLabEps ? 116.0 * std::cbrt(yr) - 16.0 : kLabKappa * yr;
          const double denom = x + 15.0 * y + 3.0 * z;
          // Black has no chromaticity; L = 0 makes u = v = 0 either way.
          const double up = denom > 0.0 ? 4.0 * x / denom : kUn;
          const double vp = denom > 0.0 ? 9.0 * y / denom : kVn;
          out[0](yy, xx) = l;
          out[1](yy, xx) = 13.0 * l * (up - kUn);
          out[2](yy, xx) = 13.0 * l * (vp - kVn);
        }
      }
      return out;
    }
  }
  return {img.r, img.g, img.b};
}

Image convert_from(const std::array<Plane, 3>& planes, ColorSpace source) {
  const Eigen::Index h = planes[0].rows();
  const Eigen::Index w = planes[0].cols();
  Image img(h, w);

  switch (source) {
    case ColorSpace::RGB:
      img.r = planes[0];
      img.g = planes[1];
      img.b = planes[2];
      return img;

    case ColorSpace::YCbCr: {
      const Plane& y = planes[0];
      Plane cb = planes[1] - 0.5;
      Plane cr = planes[2] - 0.5;
      img.r = (y + 1.402 * cr).min(1.0).max(0.0);
      img.g = (y - 0.344136286 * cb - 0.714136286 * cr).min(1.0).max(0.0);
      img.b = (y + 1.772 * cb).min(1.0).max(0.0);
      return img;
    }

    case ColorSpace::YIQ: {
      const Plane& y = planes[0];
      const Plane& i = planes[1];
      const Plane& q = planes[2];
      img.r = (y + 0.9562957 * i + 0.6210244 * q).min(1.0).max(0.0);
      img.g = (y - 0.2721221 * i - 0.6473806 * q).min(1.0).max(0.0);
      img.b = (y - 1.1069890 * i + 1.7046150 * q).min(1.0).max(0.0);
      return img;
    }

    case ColorSpace::HSV: {
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          const double hue = planes[0](yy, xx);
          const double s = planes[1](yy, xx);
          const double v = planes[2](yy, xx);
          const double c = v * s;
          const double hp = hue / 60.0;
          const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
          double r = 0, g = 0, b = 0;
          if (hp < 1.0) { r = c; g = x; }
          else if (hp < 2.0) { r = x; g = c; }
          else if (hp < 3.0) { g = c; b = x; }
          else if (hp < 4.0) { g = x; b = c; }
          else if (hp < 5.0) { r = x; b = c; }
          else { r = c; b = x; }
          const double m = v - c;
          img.r(yy, xx) = clamp01(r + m);
          img.g(yy, xx) = clamp01(g + m);
          img.b(yy, xx) = clamp01(b + m);
        }
      }
      return img;
    }

    case ColorSpace::CIELab: {
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          const double l = planes[0](yy, xx);
          const double fy = (l + 16.0) / 116.0;
          const double fx = fy + planes[1](yy, xx) / 500.0;
          const double fz = fy - planes[2](yy, xx) / 200.0;
          double r, g, b;
          xyz_to_rgb(lab_f_inv(fx) * kXn, lab_f_inv(fy) * kYn,
                     lab_f_inv(fz) * kZn, r, g, b);
          img.r(yy, xx) = clamp01(r);
          img.g(yy, xx) = clamp01(g);
          img.b(yy, xx) = clamp01(b);
        }
      }
      return img;
    }

    case ColorSpace::CIELuv: {
      for (Eigen::Index yy = 0; yy < h; ++yy) {
        for (Eigen::Index xx = 0; xx < w; ++xx) {
          const double l = planes[0](yy, xx);
          double x = 0.0, y = 0.0, z = 0.0;
          if (l > 0.0) {
            const double up = planes[1](yy, xx) / (13.0 * l) + kUn;
            const double vp = planes[2](yy, xx) / (13.0 * l) + kVn;
            y = l > 8.0 ? kYn * std::pow((l + 16.0) / 116.0, 3.0)
                        : kYn * l / kLabKappa;
            if (vp > 0.0) {
              x = y * 9.0 * up / (4.0 * vp);
              z = y * (12.0 - 3.0 * up - 20.0 * vp) / (4.0 * vp);
            }
          }
          double r, g, b;
          xyz_to_rgb(x, y, z, r, g, b);
          img.r(yy, xx) = clamp01(r);
          img.g(yy, xx) = clamp01(g);
          img.b(yy, xx) = clamp01(b);
        }
      }
      return img;
    }
  }
  return img;
}

GrayImage to_gray(const Image& img) {
  Plane luma = 0.299 * img.r + 0.587 * img.g + 0.114 * img.b;
  return GrayImage(luma.min(1.0).max(0.0));
}

}  // namespace lesionlab
