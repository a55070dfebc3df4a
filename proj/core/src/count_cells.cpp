#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leuko/error.hpp"
#include "leuko/raster.hpp"
#include "leuko/shapes.hpp"

namespace leuko::shapes {

namespace {

struct Candidate {
  CellDetection det;
  std::size_t order = 0;
};

bool plausible(const EllipseFit& fit, std::span<const Pixel> support, const DetectionParams& p, int width,
               int height, std::string& why) {
  const EllipseParams& e = fit.ellipse;
  if (fit.rms > p.max_fit_rms) {
    why = "fit rms " + std::to_string(fit.rms) + " exceeds limit";
    return false;
  }
  if (e.b < p.min_semi_minor) {
    why = "semi-minor axis too small";
    return false;
  }
  if (e.cx < 0.0 || e.cy < 0.0 || e.cx >= width || e.cy >= height || e.a > std::max(width, height)) {
    why = "ellipse outside the image";
    return false;
  }
  if (arc_coverage_deg(e, support) < p.min_arc_coverage_deg) {
    why = "support covers too little of the ellipse";
    return false;
  }
  return true;
}

std::optional<CellDetection> try_fit(std::span<const Pixel> support, const DetectionParams& p, int width,
                                     int height, std::string& why) {
  if (support.size() < std::max<std::size_t>(p.min_fit_points, 5)) {
    why = "too few points (" + std::to_string(support.size()) + ")";
    return std::nullopt;
  }
  EllipseFit fit;
  try {
    fit = fit_ellipse(support);
  } catch (const FitError& e) {
    why = e.what();
    return std::nullopt;
  }
  if (!plausible(fit, support, p, width, height, why)) return std::nullopt;
  CellDetection d;
  d.kind = CellKind::ellipse;
  d.geometry = fit.ellipse;
  d.fit_rms = fit.rms;
  d.support_points = support.size();
  return d;
}

bool duplicates(const EllipseParams& l, const EllipseParams& r) {
  const double d = std::hypot(l.cx - r.cx, l.cy - r.cy);
  return d < 0.5 * std::min(l.b, r.b);
}

void fill_counts(CellDetection& det, const StainMasks& masks) {
  const BinaryMask region = detection_region(det, masks.wbc.width(), masks.wbc.height());
  det.wbc_pixel_count = det.nucleus_pixel_count = det.granule_pixel_count = 0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (!region.data()[i] || !masks.wbc.data()[i]) continue;
    ++det.wbc_pixel_count;
    if (!masks.nucleus.data()[i]) continue;
    ++det.nucleus_pixel_count;
    if (masks.granule.data()[i]) ++det.granule_pixel_count;
  }
}

}  // namespace

BinaryMask detection_region(const CellDetection& det, int width, int height) {
  BinaryMask out(width, height);
  if (det.kind == CellKind::circle && det.contour) {
    const Contour& c = *det.contour;
    const int ox = c.bbox.min_x - 1;
    const int oy = c.bbox.min_y - 1;
    BinaryMask local(c.bbox.width() + 3, c.bbox.height() + 3);
    for (const Pixel& p : c.pixels) local.set(p.x - ox, p.y - oy);
    local = raster::fill_holes(local);
    for (int y = 0; y < local.height(); ++y) {
      for (int x = 0; x < local.width(); ++x) {
        if (local.test(x, y) && out.contains(x + ox, y + oy)) out.set(x + ox, y + oy);
      }
    }
    return out;
  }
  const EllipseParams& e = det.geometry;
  const int x0 = std::max(0, static_cast<int>(std::floor(e.cx - e.a)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(e.cx + e.a)));
  const int y0 = std::max(0, static_cast<int>(std::floor(e.cy - e.a)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(e.cy + e.a)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (inside_ellipse(e, {static_cast<double>(x), static_cast<double>(y)})) out.set(x, y);
    }
  }
  return out;
}

CountResult count_cells(const BinaryMask& edges, const StainMasks& masks, const DetectionParams& params) {
  if (!edges.same_shape(masks.wbc) || !edges.same_shape(masks.nucleus) || !edges.same_shape(masks.granule)) {
    throw std::invalid_argument("edge and stain masks must share dimensions");
  }
  params.merge.validate();
  const int width = edges.width();
  const int height = edges.height();

  CountResult result;
  std::vector<Contour> contours = trace_contours(edges);
  result.diagnostics.contours = contours.size();

  std::vector<Contour> rest;
  for (Contour& c : contours) {
    if (c.closed && circle_test(c, params.circle_tolerance_pct)) {
      CellDetection d;
      d.kind = CellKind::circle;
      const double cx = 0.5 * (c.bbox.min_x + c.bbox.max_x);
      const double cy = 0.5 * (c.bbox.min_y + c.bbox.max_y);
      double r = 0.0;
      for (const Pixel& p : c.points) r += std::hypot(p.x - cx, p.y - cy);
      r /= static_cast<double>(c.points.size());
      d.geometry = {cx, cy, r, r, 0.0};
      d.support_points = c.points.size();
      d.contour = std::move(c);
      fill_counts(d, masks);
      result.detections.push_back(std::move(d));
      ++result.diagnostics.circles;
    } else {
      rest.push_back(std::move(c));
    }
  }

  const std::vector<CurveSegment> segments = split_curve_segments(rest, params.split);
  result.diagnostics.segments = segments.size();
  const auto groups = merge_segments(segments, params.merge);
  result.diagnostics.groups = groups.size();

  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<Pixel> support;
    for (std::size_t idx : groups[g]) {
      support.insert(support.end(), segments[idx].points.begin(), segments[idx].points.end());
    }
    std::string why;
    if (auto d = try_fit(support, params, width, height, why)) {
      candidates.push_back({std::move(*d), g});
      continue;
    }
    result.diagnostics.dropped.push_back("group " + std::to_string(g) + ": " + why);
    if (groups[g].size() < 2) continue;
    // A rejected merge may still hold individually detectable arcs.
    for (std::size_t idx : groups[g]) {
      std::string seg_why;
      if (auto d = try_fit(segments[idx].points, params, width, height, seg_why)) {
        candidates.push_back({std::move(*d), g});
      } else {
        result.diagnostics.dropped.push_back("segment " + std::to_string(idx) + ": " + seg_why);
      }
    }
  }

  std::vector<std::size_t> by_support(candidates.size());
  for (std::size_t i = 0; i < by_support.size(); ++i) by_support[i] = i;
  std::stable_sort(by_support.begin(), by_support.end(), [&](std::size_t l, std::size_t r) {
    return candidates[l].det.support_points > candidates[r].det.support_points;
  });
  std::vector<char> keep(candidates.size(), 0);
  for (std::size_t i : by_support) {
    bool dup = false;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (keep[j] && duplicates(candidates[i].det.geometry, candidates[j].det.geometry)) dup = true;
    }
    if (dup) {
      result.diagnostics.dropped.push_back("duplicate ellipse from group " + std::to_string(candidates[i].order));
    } else {
      keep[i] = 1;
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!keep[i]) continue;
    fill_counts(candidates[i].det, masks);
    result.detections.push_back(std::move(candidates[i].det));
  }
  return result;
}

}  // namespace leuko::shapes
