#include "leuko/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "leuko/error.hpp"

namespace leuko::harness {

using nlohmann::json;

namespace {

features::PiMode pi_mode(fuzzy::Mode m) {
  return m == fuzzy::Mode::standard ? features::PiMode::standard : features::PiMode::paper_compat;
}

json range_json(const raster::ColorRange& r) {
  return {{"hue", {r.hue.min, r.hue.max}},
          {"saturation", {r.saturation.min, r.saturation.max}},
          {"value", {r.value.min, r.value.max}}};
}

raster::Interval interval_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument(what + " must be a [min, max] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void read_range(const json& j, const std::string& key, raster::ColorRange& r) {
  if (!j.contains(key)) return;
  const json& o = j.at(key);
  if (o.contains("hue")) r.hue = interval_from(o.at("hue"), key + ".hue");
  if (o.contains("saturation")) r.saturation = interval_from(o.at("saturation"), key + ".saturation");
  if (o.contains("value")) r.value = interval_from(o.at("value"), key + ".value");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json model_json(const fuzzy::FuzzyModel& m) {
  json vars = json::array();
  for (const fuzzy::FuzzyVariable& v : m.variables) {
    json terms = json::array();
    for (const fuzzy::FuzzyTerm& t : v.terms) {
      terms.push_back({{"label", t.label}, {"a", t.a}, {"b", t.b}, {"c", t.c}, {"shape", fuzzy::to_string(t.shape)}});
    }
    vars.push_back({{"name", v.name}, {"terms", terms}});
  }
  json rules = json::array();
  for (const fuzzy::FuzzyRule& r : m.rules) {
    json jr = {{"id", r.id}, {"output", r.output}};
    for (std::size_t i = 0; i < r.antecedents.size() && i < m.variables.size(); ++i) {
      jr[m.variables[i].name] = r.antecedents[i];
    }
    if (r.connective == fuzzy::Connective::or_max) jr["connective"] = "or";
    rules.push_back(jr);
  }
  return {{"variables", vars},
          {"rules", rules},
          {"wa_bands",
           {{"healthy_below", m.bands.healthy_below}, {"all_up_to", m.bands.all_up_to}, {"max_wa", m.bands.max_wa}}}};
}

void read_model(const json& j, fuzzy::FuzzyModel& m) {
  if (j.contains("variables")) {
    m.variables.clear();
    for (const json& jv : j.at("variables")) {
      fuzzy::FuzzyVariable v;
      v.name = jv.at("name").get<std::string>();
      for (const json& jt : jv.at("terms")) {
        v.terms.push_back({jt.at("label").get<std::string>(), jt.at("a").get<double>(), jt.at("b").get<double>(),
                           jt.at("c").get<double>(), fuzzy::parse_shape(jt.at("shape").get<std::string>())});
      }
      m.variables.push_back(std::move(v));
    }
  }
  if (j.contains("rules")) {
    m.rules.clear();
    int next_id = 1;
    for (const json& jr : j.at("rules")) {
      fuzzy::FuzzyRule r;
      r.id = jr.value("id", next_id);
      next_id = r.id + 1;
      for (const fuzzy::FuzzyVariable& v : m.variables) {
        r.antecedents.push_back(jr.value(v.name, std::string(fuzzy::kWildcard)));
      }
      r.output = jr.at("output").get<double>();
      const std::string conn = jr.value("connective", std::string("and"));
      if (conn == "and") {
        r.connective = fuzzy::Connective::and_min;
      } else if (conn == "or") {
        r.connective = fuzzy::Connective::or_max;
      } else {
        throw std::invalid_argument("rule connective must be 'and' or 'or'");
      }
      m.rules.push_back(std::move(r));
    }
  }
  if (j.contains("wa_bands")) {
    const json& b = j.at("wa_bands");
    read(b, "healthy_below", m.bands.healthy_below);
    read(b, "all_up_to", m.bands.all_up_to);
    read(b, "max_wa", m.bands.max_wa);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  for (const raster::ColorRange* r : {&colors.wbc, &colors.nucleus, &colors.granule, &colors.rbc}) r->validate();
  if (threshold < 1 || threshold > 255) throw std::invalid_argument("threshold must lie in [1, 255]");
  canny.validate();
  detection.merge.validate();
  if (!(detection.circle_tolerance_pct >= 0.0 && detection.circle_tolerance_pct < 100.0)) {
    throw std::invalid_argument("circle_tolerance_pct must lie in [0, 100)");
  }
  if (!(detection.max_fit_rms > 0.0)) throw std::invalid_argument("max_fit_rms must be positive");
  if (!(detection.split.corner_angle_deg > 0.0 && detection.split.corner_angle_deg < 180.0)) {
    throw std::invalid_argument("corner_angle_deg must lie in (0, 180)");
  }
  if (!(calibration.rbc_diameter_um > 0.0 && calibration.rbc_pixel_count > 0.0)) {
    throw std::invalid_argument("calibration values must be positive");
  }
  model.validate();
}

features::CalibrationProfile PipelineConfig::calibration_profile(std::optional<double> rbc_pixel_count) const {
  return features::calibrate(rbc_pixel_count.value_or(calibration.rbc_pixel_count), calibration.rbc_diameter_um,
                             pi_mode(model.mode));
}

json to_json(const PipelineConfig& cfg) {
  const shapes::DetectionParams& d = cfg.detection;
  return {
      {"schema_version", kConfigSchemaVersion},
      {"mode", fuzzy::to_string(cfg.mode())},
      {"color_ranges",
       {{"wbc", range_json(cfg.colors.wbc)},
        {"nucleus", range_json(cfg.colors.nucleus)},
        {"granule", range_json(cfg.colors.granule)},
        {"rbc", range_json(cfg.colors.rbc)}}},
      {"threshold", cfg.threshold},
      {"min_region_pixels", cfg.min_region_pixels},
      {"canny", {{"sigma", cfg.canny.sigma}, {"low", cfg.canny.low}, {"high", cfg.canny.high}}},
      {"circle_tolerance_pct", d.circle_tolerance_pct},
      {"merge",
       {{"th", d.merge.th},
        {"c", d.merge.c},
        {"mm_cut", d.merge.mm_cut},
        {"corner_angle_deg", d.split.corner_angle_deg},
        {"max_fit_rms", d.max_fit_rms},
        {"min_fit_points", d.min_fit_points},
        {"min_arc_coverage_deg", d.min_arc_coverage_deg},
        {"min_semi_minor", d.min_semi_minor}}},
      {"calibration",
       {{"rbc_diameter_um", cfg.calibration.rbc_diameter_um}, {"rbc_pixel_count", cfg.calibration.rbc_pixel_count}}},
      {"fuzzy", model_json(cfg.model)},
      {"skip_missing", cfg.skip_missing},
  };
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known = {"schema_version", "mode",      "color_ranges", "threshold",
                                              "min_region_pixels", "canny", "circle_tolerance_pct", "merge",
                                              "calibration", "fuzzy", "skip_missing"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion) {
    throw std::invalid_argument("unsupported config schema_version " + j.at("schema_version").dump());
  }

  PipelineConfig cfg;
  try {
    if (j.contains("mode")) cfg.set_mode(fuzzy::parse_mode(j.at("mode").get<std::string>()));
    if (j.contains("color_ranges")) {
      const json& c = j.at("color_ranges");
      read_range(c, "wbc", cfg.colors.wbc);
      read_range(c, "nucleus", cfg.colors.nucleus);
      read_range(c, "granule", cfg.colors.granule);
      read_range(c, "rbc", cfg.colors.rbc);
    }
    read(j, "threshold", cfg.threshold);
    read(j, "min_region_pixels", cfg.min_region_pixels);
    if (j.contains("canny")) {
      const json& c = j.at("canny");
      read(c, "sigma", cfg.canny.sigma);
      read(c, "low", cfg.canny.low);
      read(c, "high", cfg.canny.high);
    }
    read(j, "circle_tolerance_pct", cfg.detection.circle_tolerance_pct);
    if (j.contains("merge")) {
      const json& m = j.at("merge");
      read(m, "th", cfg.detection.merge.th);
      read(m, "c", cfg.detection.merge.c);
      read(m, "mm_cut", cfg.detection.merge.mm_cut);
      read(m, "corner_angle_deg", cfg.detection.split.corner_angle_deg);
      read(m, "max_fit_rms", cfg.detection.max_fit_rms);
      read(m, "min_fit_points", cfg.detection.min_fit_points);
      read(m, "min_arc_coverage_deg", cfg.detection.min_arc_coverage_deg);
      read(m, "min_semi_minor", cfg.detection.min_semi_minor);
    }
    if (j.contains("calibration")) {
      const json& c = j.at("calibration");
      read(c, "rbc_diameter_um", cfg.calibration.rbc_diameter_um);
      read(c, "rbc_pixel_count", cfg.calibration.rbc_pixel_count);
    }
    if (j.contains("fuzzy")) read_model(j.at("fuzzy"), cfg.model);
    read(j, "skip_missing", cfg.skip_missing);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  try {
    return config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError("config " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError("config " + path.string() + ": " + e.what());
  }
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

}  // namespace leuko::harness
