#include "leuko/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace leuko::fuzzy {

std::string_view to_string(Mode m) noexcept { return m == Mode::standard ? "standard" : "paper-compat"; }

std::string_view to_string(Shape s) noexcept {
  switch (s) {
    case Shape::ramp_up: return "ramp-up";
    case Shape::ramp_down: return "ramp-down";
    case Shape::triangle: return "triangle";
  }
  return "triangle";
}

std::string_view to_string(Label l) noexcept {
  switch (l) {
    case Label::healthy: return "Healthy";
    case Label::all: return "ALL";
    case Label::aml_m3: return "AML-M3";
    case Label::unidentified: return "Unidentified";
  }
  return "Unidentified";
}

Mode parse_mode(std::string_view s) {
  if (s == "standard") return Mode::standard;
  if (s == "paper-compat") return Mode::paper_compat;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

Shape parse_shape(std::string_view s) {
  if (s == "ramp-up") return Shape::ramp_up;
  if (s == "ramp-down") return Shape::ramp_down;
  if (s == "triangle") return Shape::triangle;
  throw std::invalid_argument("unknown membership shape '" + std::string(s) + "'");
}

Label parse_label(std::string_view s) {
  if (s == "Healthy") return Label::healthy;
  if (s == "ALL") return Label::all;
  if (s == "AML-M3") return Label::aml_m3;
  if (s == "Unidentified") return Label::unidentified;
  throw std::invalid_argument("unknown label '" + std::string(s) + "'");
}

void FuzzyTerm::validate() const {
  if (label.empty()) throw std::invalid_argument("fuzzy term needs a label");
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c)) || !(a <= b && b <= c)) {
    throw std::invalid_argument("term '" + label + "' needs finite breakpoints with a <= b <= c");
  }
}

void FuzzyVariable::validate() const {
  if (name.empty()) throw std::invalid_argument("fuzzy variable needs a name");
  if (terms.empty()) throw std::invalid_argument("variable '" + name + "' has no terms");
  std::set<std::string> seen;
  for (const FuzzyTerm& t : terms) {
    t.validate();
    if (t.label == kWildcard) throw std::invalid_argument("'-' is reserved for wildcards");
    if (!seen.insert(t.label).second) {
      throw std::invalid_argument("variable '" + name + "' repeats term '" + t.label + "'");
    }
  }
}

const FuzzyTerm* FuzzyVariable::find(std::string_view label) const noexcept {
  for (const FuzzyTerm& t : terms) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

double VariableDegrees::degree(std::string_view label) const {
  for (const TermDegree& t : terms) {
    if (t.label == label) return t.degree;
  }
  throw std::out_of_range("variable '" + variable + "' has no term '" + std::string(label) + "'");
}

void WaBands::validate() const {
  if (!(0.0 < healthy_below && healthy_below <= all_up_to && all_up_to <= max_wa)) {
    throw std::invalid_argument("WA bands need 0 < healthy_below <= all_up_to <= max_wa");
  }
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Literal piecewise-linear form; every side spans its own breakpoints.
double standard_membership(double x, const FuzzyTerm& t) {
  const double a = t.a, b = t.b, c = t.c;
  switch (t.shape) {
    case Shape::ramp_up:
      if (x >= b) return 1.0;
      if (x <= a) return 0.0;
      return ratio(x - a, b - a);
    case Shape::ramp_down:
      if (x <= b) return 1.0;
      if (x >= c) return 0.0;
      return ratio(c - x, c - b);
    case Shape::triangle:
      if (x == b) return 1.0;
      if (x <= a || x >= c) return 0.0;
      if (x < b) return ratio(x - a, b - a);
      return ratio(c - x, c - b);
  }
  return 0.0;
}

// Every sloped side divides by the full support width c - a.
double compat_membership(double x, const FuzzyTerm& t) {
  const double a = t.a, b = t.b, c = t.c;
  switch (t.shape) {
    case Shape::ramp_up:
      if (x >= b) return 1.0;
      if (x < a) return 0.0;
      return ratio(x - a, c - a);
    case Shape::ramp_down:
      if (x <= b) return 1.0;
      if (x > c) return 0.0;
      return ratio(c - x, c - a);
    case Shape::triangle:
      if (x == b) return 1.0;
      if (x < a || x > c) return 0.0;
      if (x < b) return ratio(x - a, c - a);
      return ratio(c - x, c - a);
  }
  return 0.0;
}

}  // namespace

double membership(double x, const FuzzyTerm& term, Mode mode) {
  if (std::isnan(x)) return 0.0;
  const double d = mode == Mode::standard ? standard_membership(x, term) : compat_membership(x, term);
  return std::clamp(d, 0.0, 1.0);
}

Degrees fuzzify(std::span<const double> values, std::span<const FuzzyVariable> vars, Mode mode) {
  if (values.size() != vars.size()) throw std::invalid_argument("one input value per fuzzy variable is required");
  Degrees out;
  out.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    VariableDegrees vd;
    vd.variable = vars[i].name;
    for (const FuzzyTerm& t : vars[i].terms) vd.terms.push_back({t.label, membership(values[i], t, mode)});
    out.push_back(std::move(vd));
  }
  return out;
}

Degrees fuzzify(const features::CellFeatures& f, std::span<const FuzzyVariable> vars, Mode mode) {
  std::vector<double> values;
  values.reserve(vars.size());
  for (const FuzzyVariable& v : vars) {
    if (v.name == "wbc_area") {
      values.push_back(f.wbc_diameter_um);
    } else if (v.name == "nucleus_ratio") {
      values.push_back(f.nucleus_ratio);
    } else if (v.name == "granule_ratio") {
      values.push_back(f.granule_ratio);
    } else {
      throw std::invalid_argument("no feature feeds variable '" + v.name + "'");
    }
  }
  return fuzzify(values, vars, mode);
}

std::vector<Firing> fire_rules(const Degrees& degrees, std::span<const FuzzyRule> rules) {
  std::vector<Firing> out;
  for (const FuzzyRule& rule : rules) {
    if (rule.antecedents.size() != degrees.size()) {
      throw std::invalid_argument("rule " + std::to_string(rule.id) + " has the wrong number of antecedents");
    }
    const bool conj = rule.connective == Connective::and_min;
    double strength = conj ? 1.0 : 0.0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      if (rule.antecedents[i] == kWildcard) continue;
      const double d = degrees[i].degree(rule.antecedents[i]);
      strength = conj ? std::min(strength, d) : std::max(strength, d);
    }
    if (strength > 0.0) out.push_back({rule.id, strength, rule.output});
  }
  return out;
}

std::optional<double> weighted_average(std::span<const Firing> firings) {
  double sw = 0.0;
  double swz = 0.0;
  double zmin = 0.0;
  double zmax = 0.0;
  bool first = true;
  for (const Firing& f : firings) {
    if (!(f.strength > 0.0)) continue;
    sw += f.strength;
    swz += f.strength * f.output;
    zmin = first ? f.output : std::min(zmin, f.output);
    zmax = first ? f.output : std::max(zmax, f.output);
    first = false;
  }
  if (!(sw > 0.0)) return std::nullopt;
  return std::clamp(swz / sw, zmin, zmax);
}

Diagnosis classify(std::optional<double> wa, const WaBands& bands) {
  bands.validate();
  Diagnosis d;
  d.wa = wa;
  if (!wa) {
    d.label = Label::unidentified;
    return d;
  }
  const double v = *wa;
  if (!(v >= 0.0 && v <= bands.max_wa)) {
    throw std::invalid_argument("WA " + std::to_string(v) + " lies outside [0, " + std::to_string(bands.max_wa) + "]");
  }
  if (v < bands.healthy_below) {
    d.label = Label::healthy;
  } else if (v <= bands.all_up_to) {
    d.label = Label::all;
  } else {
    d.label = Label::aml_m3;
  }
  return d;
}

void FuzzyModel::validate() const {
  if (variables.empty()) throw std::invalid_argument("fuzzy model has no variables");
  std::set<std::string> names;
  for (const FuzzyVariable& v : variables) {
    v.validate();
    if (!names.insert(v.name).second) throw std::invalid_argument("duplicate variable '" + v.name + "'");
  }
  std::set<int> ids;
  for (const FuzzyRule& r : rules) {
    const std::string tag = "rule " + std::to_string(r.id);
    if (!ids.insert(r.id).second) throw std::invalid_argument("duplicate " + tag);
    if (r.antecedents.size() != variables.size()) throw std::invalid_argument(tag + " has the wrong arity");
    bool any = false;
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (r.antecedents[i] == kWildcard) continue;
      any = true;
      if (!variables[i].find(r.antecedents[i])) {
        throw std::invalid_argument(tag + " names unknown term '" + r.antecedents[i] + "'");
      }
    }
    if (!any) throw std::invalid_argument(tag + " has only wildcards");
    if (r.output != 0.0 && r.output != 1.0 && r.output != 2.0) {
      throw std::invalid_argument(tag + " output must be 0, 1 or 2");
    }
  }
  bands.validate();
}

Diagnosis FuzzyModel::evaluate(const features::CellFeatures& f) const {
  const Degrees degrees = fuzzify(f, variables, mode);
  std::vector<Firing> firings = fire_rules(degrees, rules);
  Diagnosis d = classify(weighted_average(firings), bands);
  d.fired_rules = std::move(firings);
  return d;
}

FuzzyModel default_model(Mode mode) {
  FuzzyModel m;
  m.mode = mode;
  m.variables = {
      {"wbc_area",
       {{"Small", 6, 10, 15, Shape::ramp_down},
        {"Medium", 10, 15, 30, Shape::triangle},
        {"Big", 15, 25, 60, Shape::ramp_up}}},
      {"nucleus_ratio",
       {{"Small", 0, 0.2, 0.3, Shape::ramp_down},
        {"Medium", 0.2, 0.5, 0.7, Shape::triangle},
        {"Big", 0.6, 0.75, 1.0, Shape::ramp_up}}},
      {"granule_ratio", {{"Small", 0, 0.1, 0.2, Shape::ramp_down}, {"Big", 0.1, 0.3, 1.0, Shape::ramp_up}}},
  };
  m.rules = {
      {1, {"Small", "-", "Small"}, 0},    {2, {"Medium", "Small", "Small"}, 0},
      {3, {"Medium", "Small", "Big"}, 2}, {4, {"Medium", "Medium", "Small"}, 0},
      {5, {"Medium", "Medium", "Big"}, 2}, {6, {"Medium", "Big", "Small"}, 1},
      {7, {"Big", "Small", "Small"}, 0},  {8, {"Big", "Small", "Big"}, 2},
      {9, {"Big", "Medium", "Small"}, 0}, {10, {"Big", "Medium", "Big"}, 2},
  };
  return m;
}

}  // namespace leuko::fuzzy
