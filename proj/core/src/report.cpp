#include "leuko/pipeline.hpp"

namespace leuko::harness {

using nlohmann::json;

namespace {

json wa_json(const std::optional<double>& wa) { return wa ? json(*wa) : json(nullptr); }

json cell_json(const CellReport& c) {
  const shapes::CellDetection& d = c.detection;
  const shapes::EllipseParams& g = d.geometry;
  json geometry = {{"cx", g.cx}, {"cy", g.cy}};
  if (d.kind == shapes::CellKind::circle) {
    geometry["radius"] = g.a;
  } else {
    geometry["a"] = g.a;
    geometry["b"] = g.b;
    geometry["rotation"] = g.rotation;
    geometry["fit_rms"] = d.fit_rms;
  }
  return {{"kind", d.kind == shapes::CellKind::circle ? "circle" : "ellipse"},
          {"geometry", geometry},
          {"support_points", d.support_points},
          {"pixels", {{"wbc", d.wbc_pixel_count}, {"nucleus", d.nucleus_pixel_count}, {"granule", d.granule_pixel_count}}},
          {"features",
           {{"wbc_area_um2", c.features.wbc_area_um2},
            {"wbc_diameter_um", c.features.wbc_diameter_um},
            {"nucleus_ratio", c.features.nucleus_ratio},
            {"granule_ratio", c.features.granule_ratio}}}};
}

json diagnosis_json(const fuzzy::Diagnosis& d) {
  json fired = json::array();
  for (const fuzzy::Firing& f : d.fired_rules) {
    fired.push_back({{"rule", f.rule_id}, {"strength", f.strength}, {"output", f.output}});
  }
  return {{"wa", wa_json(d.wa)}, {"label", fuzzy::to_string(d.label)}, {"fired_rules", fired}};
}

}  // namespace

json to_json(const ImageReport& r, bool include_timing) {
  json cells = json::array();
  for (const CellReport& c : r.cells) cells.push_back(cell_json(c));
  json j = {
      {"schema_version", kReportSchemaVersion},
      {"image", r.image},
      {"width", r.width},
      {"height", r.height},
      {"calibration",
       {{"rbc_diameter_um", r.calibration.rbc_diameter_um},
        {"rbc_pixel_count", r.calibration.rbc_pixel_count},
        {"rbc_area_um2", r.calibration.rbc_area_um2},
        {"px_per_um2", r.calibration.px_per_um2}}},
      {"cells", cells},
      {"subject", r.subject ? json(*r.subject) : json(nullptr)},
      {"features", r.subject ? cell_json(r.cells[*r.subject])["features"] : json(nullptr)},
      {"diagnosis", diagnosis_json(r.diagnosis)},
      {"reason", r.reason},
      {"rbc_count", r.rbc_count},
      {"detection",
       {{"contours", r.diagnostics.contours},
        {"circles", r.diagnostics.circles},
        {"segments", r.diagnostics.segments},
        {"groups", r.diagnostics.groups},
        {"dropped", r.diagnostics.dropped}}},
  };
  if (include_timing) {
    j["timing_ms"] = {{"segmentation", r.timing.segmentation_ms},
                      {"edges", r.timing.edges_ms},
                      {"shapes", r.timing.shapes_ms},
                      {"classify", r.timing.classify_ms},
                      {"total", r.timing.total_ms}};
  }
  return j;
}

json to_json(const EvalReport& r) {
  json images = json::array();
  for (const EvalEntry& e : r.entries) {
    json item = {{"path", e.entry.path}, {"ground_truth", fuzzy::to_string(e.entry.truth)}};
    if (e.report) {
      item["prediction"] = fuzzy::to_string(e.report->diagnosis.label);
      item["wa"] = wa_json(e.report->diagnosis.wa);
      item["features"] = e.report->subject ? cell_json(e.report->cells[*e.report->subject])["features"] : json(nullptr);
      item["reason"] = e.report->reason;
      item["cells"] = e.report->cells.size();
    } else {
      item["error"] = e.error;
    }
    images.push_back(item);
  }
  return {{"schema_version", kReportSchemaVersion},
          {"totals", {{"TI", r.totals.ti}, {"TD", r.totals.td}, {"TW", r.totals.tw}, {"TU", r.totals.tu}}},
          {"accuracy", r.accuracy},
          {"images", images},
          {"missing", r.missing}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace leuko::harness
