#pragma once

#include <cstdint>
#include <vector>

#include "leuko/grid.hpp"

namespace leuko::edges {

/// Suppression direction bins, in degrees of the gradient orientation.
enum class Direction : std::uint8_t { deg0, deg45, deg90, deg135 };

struct GradientField {
  RealImage magnitude;
  RealImage angle;  // radians, atan2(gy, gx)
  Grid<Direction> direction;
};

struct CannyParams {
  double sigma = 1.4;
  double low = 20.0;
  double high = 60.0;

  void validate() const;
};

enum class EdgeClass : std::uint8_t { none, weak, strong };

/// Normalized 1-D Gaussian kernel of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge-replicate borders. Output stays real-valued
/// so later stages see unquantized intensities.
RealImage gaussian_smooth(const GrayImage& gray, double sigma);

/// 3x3 Sobel gradients with edge-replicate borders.
GradientField sobel_gradients(const RealImage& img);

/// Keeps local maxima along the quantized gradient direction. Suppressed pixels
/// and the one-pixel frame read 0. A pixel survives when it is strictly larger
/// than its backward neighbor and no smaller than its forward neighbor, so
/// plateaus two pixels wide collapse to one.
RealImage non_maximum_suppression(const GradientField& field);

Grid<EdgeClass> double_threshold(const RealImage& suppressed, double low, double high);

/// strong pixels plus weak pixels 8-connected (transitively) to one.
BinaryMask hysteresis(const Grid<EdgeClass>& classes);

/// smooth -> Sobel -> suppression -> double threshold -> hysteresis.
BinaryMask canny(const GrayImage& gray, const CannyParams& params);

}  // namespace leuko::edges
