#pragma once

#include <cstddef>
#include <numbers>

#include "leuko/shapes.hpp"

namespace leuko::features {

/// The pi constant used in every area/diameter conversion. Compat runs use 3.14
/// so the reference numbers reproduce exactly.
enum class PiMode { standard, paper_compat };

constexpr double pi_value(PiMode mode) noexcept { return mode == PiMode::paper_compat ? 3.14 : std::numbers::pi; }

/// Reference RBC diameter in microns.
inline constexpr double kDefaultRbcDiameterUm = 8.0;
/// Pixel count of a 30 px diameter RBC, the fixed-magnification fallback.
inline constexpr double kDefaultRbcPixelCount = 706.0;

struct CalibrationProfile {
  double rbc_diameter_um = kDefaultRbcDiameterUm;
  double rbc_pixel_count = kDefaultRbcPixelCount;
  double rbc_area_um2 = 0.0;
  double px_per_um2 = 0.0;
  PiMode pi_mode = PiMode::paper_compat;

  double pi() const noexcept { return pi_value(pi_mode); }
  void validate() const;
};

struct CellFeatures {
  double wbc_area_um2 = 0.0;
  double wbc_diameter_um = 0.0;
  double nucleus_ratio = 0.0;
  double granule_ratio = 0.0;
};

/// radius = d / 2, area = r^2 pi, px_per_um2 = pixels / area.
CalibrationProfile calibrate(double rbc_pixel_count, double rbc_diameter_um, PiMode mode = PiMode::paper_compat);

double wbc_area(double wbc_pixel_count, const CalibrationProfile& cal);

/// 2 sqrt(area / pi). Throws on negative area.
double wbc_diameter(double area_um2, PiMode mode = PiMode::paper_compat);

/// Throws leuko::FeatureError when the detection holds no WBC pixels.
CellFeatures extract_features(const shapes::CellDetection& det, const CalibrationProfile& cal);

/// Coarse RBC count: RBC-mask pixels over pixels per RBC, rounded.
std::size_t estimate_rbc_count(std::size_t rbc_mask_pixels, const CalibrationProfile& cal);

}  // namespace leuko::features
