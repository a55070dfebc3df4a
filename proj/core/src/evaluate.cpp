#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "leuko/error.hpp"
#include "leuko/pipeline.hpp"

namespace leuko::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// RFC 4180 subset: quoted fields with doubled quotes, no embedded newlines.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      out.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) throw DataError("manifest line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(was_quoted ? field : trim(field));
  return out;
}

}  // namespace

Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_csv(line, line_no);
  }
  if (header.empty()) throw DataError("manifest is empty");
  const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto path_col = column("path");
  const auto label_col = column("label");
  const auto rbc_col = column("rbc_pixel_count");
  if (!path_col || !label_col) throw DataError("manifest header must contain 'path' and 'label'");

  Manifest m;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_csv(line, line_no);
    const std::string where = "manifest line " + std::to_string(line_no);
    if (f.size() != header.size()) throw DataError(where + ": expected " + std::to_string(header.size()) + " fields");
    ManifestEntry e;
    e.path = f[*path_col];
    if (e.path.empty()) throw DataError(where + ": empty path");
    if (!seen.insert(e.path).second) throw DataError(where + ": duplicate path '" + e.path + "'");
    const std::filesystem::path p(e.path);
    e.resolved = p.is_absolute() ? p : base_dir / p;
    const std::string& label = f[*label_col];
    if (label == "ALL") {
      e.truth = fuzzy::Label::all;
    } else if (label == "AML-M3") {
      e.truth = fuzzy::Label::aml_m3;
    } else if (label == "Healthy") {
      e.truth = fuzzy::Label::healthy;
    } else {
      throw DataError(where + ": label must be ALL, AML-M3 or Healthy, got '" + label + "'");
    }
    if (rbc_col && !f[*rbc_col].empty()) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f[*rbc_col], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f[*rbc_col].size() || !(v > 0.0)) throw DataError(where + ": rbc_pixel_count must be positive");
      e.rbc_pixel_count = v;
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

double accuracy(const Totals& t) {
  if (t.ti == 0) throw std::invalid_argument("accuracy needs at least one image");
  if (t.tw + t.tu > t.ti) throw std::invalid_argument("TW + TU exceeds TI");
  return (1.0 - static_cast<double>(t.tw + t.tu) / static_cast<double>(t.ti)) * 100.0;
}

EvalReport evaluate_batch(const Manifest& manifest, const PipelineConfig& cfg, unsigned jobs) {
  if (manifest.entries.empty()) throw std::invalid_argument("manifest has no entries");
  cfg.validate();
  const std::size_t n = manifest.entries.size();
  EvalReport out;
  out.entries.resize(n);

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      EvalEntry& slot = out.entries[i];
      slot.entry = manifest.entries[i];
      try {
        ImageReport r = analyze_image(slot.entry.resolved, cfg, slot.entry.rbc_pixel_count);
        r.image = slot.entry.path;
        slot.report = std::move(r);
      } catch (const DataError& e) {
        slot.error = e.what();
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::min<std::size_t>(n, 256)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  for (const EvalEntry& e : out.entries) {
    if (!e.report) {
      if (!cfg.skip_missing) throw DataError(e.error);
      out.missing.push_back(e.entry.path);
      continue;
    }
    ++out.totals.ti;
    const fuzzy::Label got = e.report->diagnosis.label;
    if (got == fuzzy::Label::unidentified) {
      ++out.totals.tu;
    } else if (got == e.entry.truth) {
      ++out.totals.td;
    } else {
      ++out.totals.tw;
    }
  }
  out.accuracy = out.totals.ti == 0 ? 0.0 : accuracy(out.totals);
  return out;
}

}  // namespace leuko::harness
