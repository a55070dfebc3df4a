#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "leuko/grid.hpp"
#include "leuko/shapes.hpp"

namespace leuko::testing {

inline constexpr Rgb kBackground{245, 243, 240};

Rgb hsv_to_rgb(double h, double s, double v);

RasterImage blank(int width, int height, Rgb fill = kBackground);

BinaryMask filled_disc(int width, int height, double cx, double cy, double r);
BinaryMask filled_ellipse(int width, int height, const shapes::EllipseParams& e);

/// Set pixels with at least one 4-neighbor outside the mask.
BinaryMask boundary(const BinaryMask& filled);

/// One-pixel outline of a rasterized ellipse.
BinaryMask ellipse_outline(int width, int height, const shapes::EllipseParams& e);

/// Clears every pixel within `radius` of (x, y).
void erase_near(BinaryMask& m, double x, double y, double radius);

struct CellSpec {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 36.0;
  double nucleus_ratio = 0.5;
  double granule_ratio = 0.0;
};

struct SmearSpec {
  int width = 160;
  int height = 160;
  std::vector<CellSpec> cells;
  std::vector<shapes::Point2> rbcs;
  double rbc_radius = 15.0;
};

Rgb cytoplasm_color();
Rgb nucleus_color();
Rgb granule_color();
Rgb rbc_color();

/// Flat-colored smear: RBC discs, then cells as cytoplasm disc, concentric
/// nucleus disc and a dithered granule pattern inside the nucleus.
RasterImage render_smear(const SmearSpec& spec);

/// One centered cell plus two RBCs in the corners.
SmearSpec single_cell(double radius, double nucleus_ratio, double granule_ratio, int size = 160);

/// Random gray image with pixel values in [lo, hi].
GrayImage random_gray(std::mt19937_64& rng, int width, int height, int lo = 0, int hi = 255);

/// Deterministic structured images for edge tests.
std::vector<GrayImage> structured_grays();

/// Micron diameter implied by a disc of `radius` pixels at the given density.
double disc_diameter_um(double radius_px, double px_per_um2, double pi);

}  // namespace leuko::testing
