#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leuko/grid.hpp"

namespace leuko::shapes {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;

  int width() const noexcept { return max_x - min_x; }
  int height() const noexcept { return max_y - min_y; }
};

/// One 8-connected edge component. `points` is the ordered outer boundary
/// trace (consecutive entries are 8-neighbors); `pixels` is every pixel of the
/// component in scanline order.
struct Contour {
  std::vector<Pixel> points;
  std::vector<Pixel> pixels;
  BoundingBox bbox;
  bool closed = false;  // the component encloses at least one background pixel

  int height() const noexcept { return bbox.height(); }
};

/// Junction- and corner-free chain of edge pixels. Tangents are line angles
/// normalized to (-pi/2, pi/2].
struct CurveSegment {
  std::vector<Pixel> points;
  Pixel end_a;
  Pixel end_b;
  double tangent_a = 0.0;
  double tangent_b = 0.0;
};

struct MergeParams {
  double th = 10.0;                  // endpoint distance tolerance, pixels
  double c = std::numbers::pi / 2;   // tangent normalization
  double mm_cut = 0.75;              // minimum merging measure for a union

  void validate() const;
};

struct SplitParams {
  int corner_half_window = 2;        // 5-point window
  double corner_angle_deg = 60.0;
  std::size_t tangent_points = 5;
};

struct EllipseParams {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.0;         // semi-major
  double b = 0.0;         // semi-minor
  double rotation = 0.0;  // major-axis angle, radians in (-pi/2, pi/2]
};

struct EllipseFit {
  EllipseParams ellipse;
  double rms = 0.0;  // RMS of first-order geometric distances
};

enum class CellKind { circle, ellipse };

struct CellDetection {
  CellKind kind = CellKind::circle;
  std::optional<Contour> contour;  // present for circles
  EllipseParams geometry;          // fitted ellipse, or bbox-centered circle
  double fit_rms = 0.0;
  std::size_t support_points = 0;
  std::size_t wbc_pixel_count = 0;
  std::size_t nucleus_pixel_count = 0;
  std::size_t granule_pixel_count = 0;
};

/// Masks used to fill the pixel counts of a detection. `nucleus` must already
/// include granule pixels when granules are counted as nuclear material.
struct StainMasks {
  BinaryMask wbc;
  BinaryMask nucleus;
  BinaryMask granule;
};

struct DetectionParams {
  double circle_tolerance_pct = 30.0;
  MergeParams merge;
  SplitParams split;
  double max_fit_rms = 2.0;
  std::size_t min_fit_points = 20;
  double min_arc_coverage_deg = 120.0;
  double min_semi_minor = 3.0;
};

struct CountDiagnostics {
  std::size_t contours = 0;
  std::size_t circles = 0;
  std::size_t segments = 0;
  std::size_t groups = 0;
  std::vector<std::string> dropped;
};

struct CountResult {
  std::vector<CellDetection> detections;
  CountDiagnostics diagnostics;
};

/// One contour per 8-connected component, ordered by the scanline position of
/// each component's topmost-leftmost pixel.
std::vector<Contour> trace_contours(const BinaryMask& edges);

/// Inner/outer circle band test: every contour point must lie between the
/// circles of diameter H(1 - tol/100) and H(1 + tol/100) around the bbox
/// center, H being the contour height. Throws on open contours.
bool circle_test(const Contour& contour, double tolerance_pct = 30.0);

/// Removes simple points until the mask is 8-thin. Endpoints are kept.
BinaryMask thin(const BinaryMask& mask);

/// Cuts each contour at junctions (>= 3 neighbors after thinning) and at
/// corners, returning segments of at least 3 points.
std::vector<CurveSegment> split_curve_segments(std::span<const Contour> contours, const SplitParams& params = {});

/// Builds a segment from an ordered chain, estimating end tangents from the
/// `tangent_points` pixels nearest each end.
CurveSegment make_segment(std::vector<Pixel> chain, std::size_t tangent_points = 5);

/// Line angle of the total-least-squares fit through the points, in (-pi/2, pi/2].
double line_angle(std::span<const Pixel> points);

/// Difference between two line angles, folded to [0, pi/2].
double tangent_gap(double theta_i, double theta_j) noexcept;

struct MergeTerms {
  double distance = 0.0;  // closest endpoint pair
  int d = 0;              // D of the merging measure
  double theta = 0.0;     // tangent closeness at the closest pair
  double mm = 0.0;        // d * theta
};

MergeTerms merge_terms(const CurveSegment& si, const CurveSegment& sj, const MergeParams& p);
double merging_measure(const CurveSegment& si, const CurveSegment& sj, const MergeParams& p);

/// Symmetric N x N matrix of merging measures (diagonal 0).
std::vector<std::vector<double>> merging_matrix(std::span<const CurveSegment> segments, const MergeParams& p);

/// Transitive closure of MM_ij >= mm_cut. Groups hold sorted segment indices and
/// are ordered by their smallest index.
std::vector<std::vector<std::size_t>> merge_segments(std::span<const CurveSegment> segments, const MergeParams& p);

/// Direct least-squares ellipse fit. Throws leuko::FitError.
EllipseFit fit_ellipse(std::span<const Point2> points);
EllipseFit fit_ellipse(std::span<const Pixel> points);

/// Signed-free first-order distance from a point to the ellipse outline.
double ellipse_distance(const EllipseParams& e, Point2 p) noexcept;
bool inside_ellipse(const EllipseParams& e, Point2 p) noexcept;

/// Largest angular extent (degrees) around the ellipse center not left as a gap.
double arc_coverage_deg(const EllipseParams& e, std::span<const Pixel> points);

/// Pixels covered by a detection: the filled contour for circles, the ellipse
/// interior for ellipses. Clipped to the given dimensions.
BinaryMask detection_region(const CellDetection& det, int width, int height);

CountResult count_cells(const BinaryMask& edges, const StainMasks& masks, const DetectionParams& params = {});

}  // namespace leuko::shapes
