#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "leuko/config.hpp"

namespace leuko::harness {

inline constexpr int kReportSchemaVersion = 1;

/// Masks derived from one input image.
struct Segmentation {
  BinaryMask region;   // cleaned, hole-filled stain union
  BinaryMask wbc;      // region pixels above the grayscale threshold
  BinaryMask nucleus;  // nucleus or granule stain inside the WBC mask
  BinaryMask granule;  // granule stain inside the WBC mask
  BinaryMask rbc;
};

Segmentation segment(const RasterImage& img, const PipelineConfig& cfg);

struct CellReport {
  shapes::CellDetection detection;
  features::CellFeatures features;
};

struct Timing {
  double segmentation_ms = 0.0;
  double edges_ms = 0.0;
  double shapes_ms = 0.0;
  double classify_ms = 0.0;
  double total_ms = 0.0;
};

struct ImageReport {
  std::string image;
  int width = 0;
  int height = 0;
  std::vector<CellReport> cells;
  std::optional<std::size_t> subject;  // index of the classified cell
  fuzzy::Diagnosis diagnosis;
  std::string reason;
  std::size_t rbc_count = 0;
  features::CalibrationProfile calibration;
  shapes::CountDiagnostics diagnostics;
  Timing timing;
};

/// Runs segmentation, edges, detection, features and classification. The
/// largest cell by WBC pixels is the subject; ties go to the earlier cell.
ImageReport analyze(const RasterImage& img, const PipelineConfig& cfg,
                    std::optional<double> rbc_pixel_count = std::nullopt);

/// Throws leuko::DataError when the file cannot be decoded.
ImageReport analyze_image(const std::filesystem::path& path, const PipelineConfig& cfg,
                          std::optional<double> rbc_pixel_count = std::nullopt);

struct ManifestEntry {
  std::string path;  // as written in the manifest
  std::filesystem::path resolved;
  fuzzy::Label truth = fuzzy::Label::healthy;
  std::optional<double> rbc_pixel_count;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

/// CSV with a `path,label` header and an optional `rbc_pixel_count` column.
/// Relative paths resolve against `base_dir`. Throws leuko::DataError.
Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

struct Totals {
  std::size_t ti = 0;
  std::size_t td = 0;
  std::size_t tw = 0;
  std::size_t tu = 0;
};

/// (1 - (TW + TU) / TI) * 100. Throws when TI is 0 or TW + TU > TI.
double accuracy(const Totals& t);

struct EvalEntry {
  ManifestEntry entry;
  std::optional<ImageReport> report;
  std::string error;  // set for entries that could not be read
};

struct EvalReport {
  std::vector<EvalEntry> entries;
  Totals totals;
  double accuracy = 0.0;
  std::vector<std::string> missing;
};

/// Classifies every entry with up to `jobs` worker threads. Results keep
/// manifest order. Unreadable entries throw leuko::DataError unless the
/// config skips them.
EvalReport evaluate_batch(const Manifest& manifest, const PipelineConfig& cfg, unsigned jobs = 1);

nlohmann::json to_json(const ImageReport& r, bool include_timing = false);
nlohmann::json to_json(const EvalReport& r);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

/// RBC stain pixels inside an inclusive box, for calibration annotations.
std::size_t rbc_pixels_in_box(const RasterImage& img, const raster::ColorRange& rbc, int x0, int y0, int x1,
                              int y1);

struct OverlayStyle {
  Rgb outline{0, 255, 0};
  Rgb nucleus_tint{0, 255, 255};
  Rgb banner_fill{0, 0, 0};
  Rgb banner_text{255, 255, 255};
  int banner_height = 20;
};

/// Returns a copy of `img` with detection outlines, the nucleus tint inside
/// detections (when a mask is given) and a top banner with WA and label.
RasterImage render_overlay(const RasterImage& img, std::span<const shapes::CellDetection> detections,
                           const fuzzy::Diagnosis& diagnosis, const BinaryMask* nucleus = nullptr,
                           const OverlayStyle& style = {});

/// Outline pixels drawn for one detection, clipped to the image.
std::vector<Pixel> outline_pixels(const shapes::CellDetection& det, int width, int height);

}  // namespace leuko::harness
