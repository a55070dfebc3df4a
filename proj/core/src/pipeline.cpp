#include "leuko/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "leuko/error.hpp"

namespace leuko::harness {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Segmentation segment(const RasterImage& img, const PipelineConfig& cfg) {
  const BinaryMask giemsa = raster::color_filter(img, cfg.colors.wbc);
  const BinaryMask nucleus = raster::color_filter(img, cfg.colors.nucleus);
  const BinaryMask granule = raster::color_filter(img, cfg.colors.granule);

  Segmentation s;
  s.region = raster::remove_small_components(raster::fill_holes(giemsa | nucleus | granule), cfg.min_region_pixels);
  s.wbc = raster::threshold_region(raster::to_grayscale(img), s.region, cfg.threshold);
  s.nucleus = (nucleus | granule) & s.wbc;
  s.granule = granule & s.wbc;
  s.rbc = raster::color_filter(img, cfg.colors.rbc);
  for (std::size_t i = 0; i < s.rbc.size(); ++i) {
    if (s.region.data()[i]) s.rbc.data()[i] = 0;
  }
  return s;
}

ImageReport analyze(const RasterImage& img, const PipelineConfig& cfg, std::optional<double> rbc_pixel_count) {
  const auto t_start = Clock::now();
  ImageReport r;
  r.width = img.width();
  r.height = img.height();
  r.calibration = cfg.calibration_profile(rbc_pixel_count);

  auto t = Clock::now();
  const Segmentation seg = segment(img, cfg);
  r.timing.segmentation_ms = ms_since(t);

  t = Clock::now();
  const BinaryMask edges = edges::canny(raster::to_gray(seg.wbc), cfg.canny);
  r.timing.edges_ms = ms_since(t);

  t = Clock::now();
  shapes::CountResult counted = shapes::count_cells(edges, {seg.wbc, seg.nucleus, seg.granule}, cfg.detection);
  r.diagnostics = std::move(counted.diagnostics);
  r.timing.shapes_ms = ms_since(t);

  t = Clock::now();
  for (shapes::CellDetection& det : counted.detections) {
    if (det.wbc_pixel_count == 0) {
      r.diagnostics.dropped.push_back("detection without WBC pixels");
      continue;
    }
    CellReport cell;
    cell.features = features::extract_features(det, r.calibration);
    cell.detection = std::move(det);
    r.cells.push_back(std::move(cell));
  }
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    if (!r.subject || r.cells[i].detection.wbc_pixel_count > r.cells[*r.subject].detection.wbc_pixel_count) {
      r.subject = i;
    }
  }
  if (r.subject) {
    r.diagnosis = cfg.model.evaluate(r.cells[*r.subject].features);
    if (r.diagnosis.label == fuzzy::Label::unidentified) r.reason = "no rule fired";
  } else {
    r.diagnosis = fuzzy::classify(std::nullopt, cfg.model.bands);
    r.reason = "no WBC found";
  }
  r.rbc_count = features::estimate_rbc_count(seg.rbc.count(), r.calibration);
  r.timing.classify_ms = ms_since(t);
  r.timing.total_ms = ms_since(t_start);
  return r;
}

ImageReport analyze_image(const std::filesystem::path& path, const PipelineConfig& cfg,
                          std::optional<double> rbc_pixel_count) {
  ImageReport r = analyze(raster::read_image(path), cfg, rbc_pixel_count);
  r.image = path.string();
  return r;
}

std::size_t rbc_pixels_in_box(const RasterImage& img, const raster::ColorRange& rbc, int x0, int y0, int x1,
                              int y1) {
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width() - 1);
  y1 = std::min(y1, img.height() - 1);
  std::size_t n = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) n += rbc.contains(raster::to_hsv(img(x, y)));
  }
  return n;
}

}  // namespace leuko::harness
