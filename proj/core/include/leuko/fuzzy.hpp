#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leuko/features.hpp"

namespace leuko::fuzzy {

enum class Mode { standard, paper_compat };

enum class Shape { ramp_up, ramp_down, triangle };

enum class Connective { and_min, or_max };

enum class Label { healthy, all, aml_m3, unidentified };

std::string_view to_string(Mode m) noexcept;
std::string_view to_string(Shape s) noexcept;
std::string_view to_string(Label l) noexcept;
Mode parse_mode(std::string_view s);
Shape parse_shape(std::string_view s);
Label parse_label(std::string_view s);

struct FuzzyTerm {
  std::string label;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  Shape shape = Shape::triangle;

  void validate() const;
};

struct FuzzyVariable {
  std::string name;
  std::vector<FuzzyTerm> terms;

  void validate() const;
  const FuzzyTerm* find(std::string_view label) const noexcept;
};

inline constexpr std::string_view kWildcard = "-";

/// One row of the rule table. Antecedents line up with the model's
/// variables; a "-" entry is skipped.
struct FuzzyRule {
  int id = 0;
  std::vector<std::string> antecedents;
  double output = 0.0;
  Connective connective = Connective::and_min;
};

struct TermDegree {
  std::string label;
  double degree = 0.0;
};

struct VariableDegrees {
  std::string variable;
  std::vector<TermDegree> terms;

  /// Throws std::out_of_range for an unknown label.
  double degree(std::string_view label) const;
};

using Degrees = std::vector<VariableDegrees>;

struct Firing {
  int rule_id = 0;
  double strength = 0.0;
  double output = 0.0;
};

/// WA thresholds: [0, healthy_below) Healthy, [healthy_below, all_up_to] ALL,
/// (all_up_to, max_wa] AML-M3.
struct WaBands {
  double healthy_below = 0.5;
  double all_up_to = 1.0;
  double max_wa = 2.0;

  void validate() const;
};

struct Diagnosis {
  std::optional<double> wa;
  Label label = Label::unidentified;
  std::vector<Firing> fired_rules;
};

double membership(double x, const FuzzyTerm& term, Mode mode);

/// Degrees for values given in variable order.
Degrees fuzzify(std::span<const double> values, std::span<const FuzzyVariable> vars, Mode mode);

/// The wbc_area variable receives the WBC diameter.
Degrees fuzzify(const features::CellFeatures& f, std::span<const FuzzyVariable> vars, Mode mode);

std::vector<Firing> fire_rules(const Degrees& degrees, std::span<const FuzzyRule> rules);

std::optional<double> weighted_average(std::span<const Firing> firings);

Diagnosis classify(std::optional<double> wa, const WaBands& bands = {});

struct FuzzyModel {
  std::vector<FuzzyVariable> variables;
  std::vector<FuzzyRule> rules;
  WaBands bands;
  Mode mode = Mode::paper_compat;

  void validate() const;
  Diagnosis evaluate(const features::CellFeatures& f) const;
};

/// Memberships and rule base from the reference tables.
FuzzyModel default_model(Mode mode = Mode::paper_compat);

}  // namespace leuko::fuzzy
