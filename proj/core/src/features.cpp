#include "leuko/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "leuko/error.hpp"

namespace leuko::features {

void CalibrationProfile::validate() const {
  if (!(rbc_diameter_um > 0.0 && rbc_pixel_count > 0.0 && rbc_area_um2 > 0.0 && px_per_um2 > 0.0)) {
    throw std::invalid_argument("calibration fields must all be positive");
  }
}

CalibrationProfile calibrate(double rbc_pixel_count, double rbc_diameter_um, PiMode mode) {
  if (!(rbc_pixel_count > 0.0)) throw std::invalid_argument("rbc pixel count must be positive");
  if (!(rbc_diameter_um > 0.0)) throw std::invalid_argument("rbc diameter must be positive");
  CalibrationProfile cal;
  cal.pi_mode = mode;
  cal.rbc_diameter_um = rbc_diameter_um;
  cal.rbc_pixel_count = rbc_pixel_count;
  const double radius = rbc_diameter_um / 2.0;
  cal.rbc_area_um2 = radius * radius * pi_value(mode);
  cal.px_per_um2 = rbc_pixel_count / cal.rbc_area_um2;
  return cal;
}

double wbc_area(double wbc_pixel_count, const CalibrationProfile& cal) {
  cal.validate();
  return wbc_pixel_count / cal.px_per_um2;
}

double wbc_diameter(double area_um2, PiMode mode) {
  if (area_um2 < 0.0) throw std::invalid_argument("area must be non-negative, got " + std::to_string(area_um2));
  return 2.0 * std::sqrt(area_um2 / pi_value(mode));
}

CellFeatures extract_features(const shapes::CellDetection& det, const CalibrationProfile& cal) {
  if (det.wbc_pixel_count == 0) throw FeatureError("detection has no WBC pixels");
  if (det.nucleus_pixel_count > det.wbc_pixel_count || det.granule_pixel_count > det.nucleus_pixel_count) {
    throw std::invalid_argument("detection pixel counts are inconsistent");
  }
  CellFeatures f;
  f.wbc_area_um2 = wbc_area(static_cast<double>(det.wbc_pixel_count), cal);
  f.wbc_diameter_um = wbc_diameter(f.wbc_area_um2, cal.pi_mode);
  f.nucleus_ratio = static_cast<double>(det.nucleus_pixel_count) / static_cast<double>(det.wbc_pixel_count);
  f.granule_ratio = det.nucleus_pixel_count == 0 ? 0.0
                                                 : static_cast<double>(det.granule_pixel_count) /
                                                       static_cast<double>(det.nucleus_pixel_count);
  return f;
}

std::size_t estimate_rbc_count(std::size_t rbc_mask_pixels, const CalibrationProfile& cal) {
  cal.validate();
  return static_cast<std::size_t>(std::llround(static_cast<double>(rbc_mask_pixels) / cal.rbc_pixel_count));
}

}  // namespace leuko::features
