#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "leuko/edges.hpp"
#include "leuko/features.hpp"
#include "leuko/fuzzy.hpp"
#include "leuko/raster.hpp"
#include "leuko/shapes.hpp"

namespace leuko::harness {

inline constexpr int kConfigSchemaVersion = 1;

/// Environment variable naming a config file when --config is absent.
inline constexpr const char* kConfigEnvVar = "LEUKO_CONFIG";

struct StainRanges {
  raster::ColorRange wbc = raster::giemsa_purple();
  raster::ColorRange nucleus = raster::nucleus_dark_blue();
  raster::ColorRange granule = raster::granule_reddish_purple();
  raster::ColorRange rbc = raster::rbc_red();
};

struct CalibrationSource {
  double rbc_diameter_um = features::kDefaultRbcDiameterUm;
  double rbc_pixel_count = features::kDefaultRbcPixelCount;
};

struct PipelineConfig {
  StainRanges colors;
  int threshold = 1;
  std::size_t min_region_pixels = 64;
  edges::CannyParams canny;
  shapes::DetectionParams detection;
  CalibrationSource calibration;
  fuzzy::FuzzyModel model = fuzzy::default_model();
  bool skip_missing = false;

  fuzzy::Mode mode() const noexcept { return model.mode; }
  void set_mode(fuzzy::Mode m) noexcept { model.mode = m; }

  /// Throws std::invalid_argument naming the offending section.
  void validate() const;

  /// Profile from the configured source, optionally with a per-image pixel count.
  features::CalibrationProfile calibration_profile(std::optional<double> rbc_pixel_count = std::nullopt) const;
};

nlohmann::json to_json(const PipelineConfig& cfg);

/// Keys absent from `j` keep their defaults. Unknown top-level keys and
/// schema mismatches throw std::invalid_argument.
PipelineConfig config_from_json(const nlohmann::json& j);

/// Throws leuko::DataError for unreadable or malformed files.
PipelineConfig load_config(const std::filesystem::path& path);

/// Path from --config, else from the environment, else none.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& flag);

}  // namespace leuko::harness
