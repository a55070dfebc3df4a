#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "leuko/error.hpp"
#include "leuko/pipeline.hpp"

namespace fs = std::filesystem;
using namespace leuko;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw DataError("cannot write " + output);
  out << text;
  if (!out) throw DataError("write failed for " + output);
}

harness::PipelineConfig load(const std::optional<fs::path>& flag, const std::string& mode) {
  harness::PipelineConfig cfg;
  if (const auto path = harness::resolve_config_path(flag)) cfg = harness::load_config(*path);
  if (!mode.empty()) cfg.set_mode(fuzzy::parse_mode(mode));
  cfg.validate();
  return cfg;
}

nlohmann::json calibrate_annotation(const fs::path& path, const harness::PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open annotation " + path.string());
  nlohmann::json a;
  try {
    a = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("annotation " + path.string() + ": " + e.what());
  }
  const double diameter = a.value("rbc_diameter_um", cfg.calibration.rbc_diameter_um);
  double pixels = 0.0;
  if (a.contains("rbc_pixel_count")) {
    pixels = a.at("rbc_pixel_count").get<double>();
  } else if (a.contains("image") && a.contains("bbox")) {
    fs::path img_path = a.at("image").get<std::string>();
    if (img_path.is_relative()) img_path = path.parent_path() / img_path;
    const auto box = a.at("bbox").get<std::vector<int>>();
    if (box.size() != 4) throw DataError("annotation bbox must be [x0, y0, x1, y1]");
    const RasterImage img = raster::read_image(img_path);
    pixels = static_cast<double>(harness::rbc_pixels_in_box(img, cfg.colors.rbc, box[0], box[1], box[2], box[3]));
  } else {
    throw DataError("annotation needs rbc_pixel_count, or image and bbox");
  }
  if (!(pixels > 0.0)) throw DataError("annotation yields no RBC pixels");
  const features::CalibrationProfile scaled =
      features::calibrate(pixels, diameter, cfg.calibration_profile().pi_mode);
  return {{"schema_version", harness::kConfigSchemaVersion},
          {"calibration", {{"rbc_diameter_um", scaled.rbc_diameter_um}, {"rbc_pixel_count", scaled.rbc_pixel_count}}},
          {"rbc_area_um2", scaled.rbc_area_um2},
          {"px_per_um2", scaled.px_per_um2},
          {"mode", fuzzy::to_string(cfg.mode())}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blood-smear WBC detection and leukemia classification"};
  app.require_subcommand(1);

  std::string config_flag;
  std::string mode;
  app.add_option("--config", config_flag, "Pipeline config JSON (default: $LEUKO_CONFIG)");
  app.add_option("--mode", mode, "Evaluation mode")->check(CLI::IsMember({"standard", "paper-compat"}));

  std::string image, overlay, output;
  bool timing = false;
  double rbc_pixels = 0.0;
  CLI::App* analyze = app.add_subcommand("analyze", "Analyze one image and print a JSON report");
  analyze->add_option("image", image, "Input image (PNG, JPEG, BMP)")->required();
  analyze->add_option("--overlay", overlay, "Write an annotated PNG");
  analyze->add_flag("--timing", timing, "Include stage timings");
  analyze->add_option("--rbc-pixels", rbc_pixels, "Per-image RBC pixel count")->check(CLI::PositiveNumber);
  analyze->add_option("-o,--output", output, "Report path (default: stdout)");

  std::string manifest;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* evaluate = app.add_subcommand("evaluate", "Classify a manifest and report accuracy");
  evaluate->add_option("manifest", manifest, "CSV manifest with path,label columns")->required();
  evaluate->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  evaluate->add_option("-o,--output", output, "Report path (default: stdout)");

  std::string annotation;
  CLI::App* calibrate = app.add_subcommand("calibrate", "Derive a calibration block from an RBC annotation");
  calibrate->add_option("annotation", annotation, "Annotation JSON")->required();
  calibrate->add_option("-o,--output", output, "Output path (default: stdout)");

  CLI::App* dump_config = app.add_subcommand("dump-config", "Print the effective configuration");
  dump_config->add_option("-o,--output", output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::optional<fs::path> cfg_path =
        config_flag.empty() ? std::nullopt : std::optional<fs::path>(config_flag);
    const harness::PipelineConfig cfg = load(cfg_path, mode);

    if (*analyze) {
      const RasterImage img = raster::read_image(image);
      harness::ImageReport r =
          harness::analyze(img, cfg, rbc_pixels > 0.0 ? std::optional<double>(rbc_pixels) : std::nullopt);
      r.image = image;
      if (!overlay.empty()) {
        std::vector<shapes::CellDetection> dets;
        for (const harness::CellReport& c : r.cells) dets.push_back(c.detection);
        const harness::Segmentation seg = harness::segment(img, cfg);
        raster::write_png(harness::render_overlay(img, dets, r.diagnosis, &seg.nucleus), overlay);
      }
      emit(harness::dump(harness::to_json(r, timing)), output);
    } else if (*evaluate) {
      const harness::EvalReport r = harness::evaluate_batch(harness::load_manifest(manifest), cfg, jobs);
      emit(harness::dump(harness::to_json(r)), output);
    } else if (*calibrate) {
      emit(harness::dump(calibrate_annotation(annotation, cfg)), output);
    } else if (*dump_config) {
      emit(harness::dump(harness::to_json(cfg)), output);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
