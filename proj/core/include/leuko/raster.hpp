#pragma once

#include <filesystem>
#include <string>

#include "leuko/grid.hpp"

namespace leuko::raster {

struct Hsv {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

Hsv to_hsv(Rgb c) noexcept;

struct Interval {
  double min = 0.0;
  double max = 0.0;
};

/// HSV box used by the stain filters. When hue.min > hue.max the hue interval
/// wraps through 0 degrees.
struct ColorRange {
  std::string name;
  Interval hue;
  Interval saturation;
  Interval value;

  /// Throws std::invalid_argument when bounds are out of domain.
  void validate() const;
  bool contains(const Hsv& c) const noexcept;

  /// Accepts every color.
  static ColorRange everything();
};

// Default stain ranges. Tune per staining batch through the config file.
ColorRange giemsa_purple();
ColorRange nucleus_dark_blue();
ColorRange granule_reddish_purple();
ColorRange rbc_red();

/// Luma grayscale: round(0.299 R + 0.587 G + 0.114 B).
GrayImage to_grayscale(const RasterImage& img);

/// Fixed threshold: a1 where value >= a_th, a0 elsewhere. a_th must lie in (0, 255].
BinaryMask threshold(const GrayImage& gray, int a_th, bool a0 = false, bool a1 = true);

/// Threshold restricted to a region; pixels outside the region are forced to a0.
BinaryMask threshold_region(const GrayImage& gray, const BinaryMask& region, int a_th, bool a0 = false,
                            bool a1 = true);

BinaryMask color_filter(const RasterImage& img, const ColorRange& range);

/// Embeds a mask as {0, 255} intensities.
GrayImage to_gray(const BinaryMask& mask);

/// Sets every false pixel that is not 4-connected to the image border.
BinaryMask fill_holes(const BinaryMask& mask);

/// Drops 8-connected components with fewer than min_pixels pixels.
BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_pixels);

/// Decodes PNG, JPEG or BMP. Throws leuko::DataError when the file cannot be read.
RasterImage read_image(const std::filesystem::path& path);

/// Writes a PNG. Throws leuko::DataError with the path on failure.
void write_png(const RasterImage& img, const std::filesystem::path& path);

}  // namespace leuko::raster
