#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "ernn/geometry.hpp"
#include "ernn/network.hpp"
#include "ernn/rational.hpp"

namespace ernn {

enum class GadgetKind { Variable, Inversion, LowerBound };

[[nodiscard]] const char* to_string(GadgetKind kind);

// Per-dimension label of a data line or (weak) data point.
struct Label {
  enum class Kind { Exact, AtLeast };
  Kind kind = Kind::Exact;
  Rational value;

  static Label exact(Rational v) { return {Kind::Exact, std::move(v)}; }
  static Label at_least(Rational v) { return {Kind::AtLeast, std::move(v)}; }
  [[nodiscard]] bool is_exact() const { return kind == Kind::Exact; }
  [[nodiscard]] bool accepts(const Rational& y) const { return is_exact() ? y == value : y >= value; }

  friend bool operator==(const Label&, const Label&) = default;
};

using Label2 = std::array<Label, 2>;

struct TemplateEntry {
  Rational offset;  // distance to the first line
  Label2 label;

  // Data lines carry exact labels; entries with a lower bound are weak points.
  [[nodiscard]] bool is_line() const { return label[0].is_exact() && label[1].is_exact(); }
};

struct GadgetTemplate {
  GadgetKind kind = GadgetKind::Variable;
  std::array<bool, 2> active{true, true};  // meaningful for lower bound gadgets
  std::vector<TemplateEntry> entries;
  int breakline_budget = 0;
  Rational width;

  [[nodiscard]] std::vector<TemplateEntry> lines() const;
};

// Tables for the three gadget kinds. `active` selects the active dimensions of
// a lower bound gadget and is ignored otherwise; throws InvalidState if a lower
// bound gadget would have no active dimension.
[[nodiscard]] GadgetTemplate gadget_template(GadgetKind kind, std::array<bool, 2> active = {true, true});

// Offset of the weak point q of a variable gadget.
[[nodiscard]] Rational variable_q_offset();
// Offset at which a lower bound gadget simulates its weak point.
[[nodiscard]] Rational lower_bound_center();

struct GadgetPlacement {
  GadgetTemplate tmpl;
  Direction normal;
  Rational base_offset;  // the first line is { p : normal . p = base_offset }

  [[nodiscard]] OrientedLine line_at(const Rational& offset) const { return {normal, base_offset + offset}; }
  [[nodiscard]] Rational local_offset(const Point2& p) const { return signed_value({normal, base_offset}, p); }
  // Closed stripe between the first and last line.
  [[nodiscard]] bool in_stripe(const Point2& p) const;
  [[nodiscard]] std::vector<OrientedLine> data_lines() const;
};

// Slopes for variable/inversion gadgets, depth for lower bound gadgets.
struct GadgetState {
  Rational slope_1;
  Rational slope_2;
  Rational depth;

  static GadgetState variable(const Rational& slope) { return {slope, slope, 0}; }
  // slope_2 follows from slope_1 * slope_2 = slope_1 + slope_2.
  static GadgetState inversion(const Rational& slope_1);
  static GadgetState lower_bound(const Rational& depth) { return {0, 0, depth}; }
};

// Throws InvalidState unless the state is admissible for the template.
void validate_state(const GadgetTemplate& tmpl, const GadgetState& state);

// Contribution of the canonical witness shape at offset t from the first line.
[[nodiscard]] Value2 profile(const GadgetTemplate& tmpl, const GadgetState& state, const Rational& t);

enum class MeasuringSide { Lower, Upper };

// Offset (from the first line) of a measuring line; dim is 0 or 1.
[[nodiscard]] Rational measuring_offset(GadgetKind kind, MeasuringSide side, std::size_t dim);
[[nodiscard]] OrientedLine measuring_line(const GadgetPlacement& placement, MeasuringSide side, std::size_t dim);

// One ridge of a witness shape: change (c1, c2) of the slope along the normal
// at offset `at`.
struct Ridge {
  Rational at;
  Rational c1;
  Rational c2;
};

[[nodiscard]] std::vector<Ridge> witness_ridges(const GadgetTemplate& tmpl, const GadgetState& state);
[[nodiscard]] std::vector<HiddenNeuron> witness_neurons(const GadgetPlacement& placement, const GadgetState& state);

struct CrossSectionPoint {
  Rational x;
  Label2 label;
};

// Orthogonal cross-section: every entry of the template, in order.
[[nodiscard]] std::vector<CrossSectionPoint> cross_section(const GadgetTemplate& tmpl);

struct FittingProfile {
  std::vector<Rational> breakpoints;
  // Span start, breakpoints, span end.
  std::vector<Rational> nodes;
  // slopes[dim][i] is the slope of piece i; piece 0 ends at the first breakpoint.
  std::array<std::vector<Rational>, 2> slopes;
  // values[dim][i] at nodes[i].
  std::array<std::vector<Rational>, 2> values;
  // False if the exact labels leave the piece values free; the reported
  // values are then one feasible choice.
  bool determined = true;

  [[nodiscard]] Rational slope_change(std::size_t dim, std::size_t breakpoint) const {
    return slopes[dim][breakpoint + 1] - slopes[dim][breakpoint];
  }
  [[nodiscard]] Rational evaluate(std::size_t dim, const Rational& x) const;

  friend bool operator==(const FittingProfile&, const FittingProfile&) = default;
  friend auto operator<=>(const FittingProfile& a, const FittingProfile& b) {
    return std::tie(a.breakpoints, a.slopes, a.values) <=> std::tie(b.breakpoints, b.slopes, b.values);
  }
};

// Every continuous piecewise linear fit with exactly k breakpoints, each a
// multiple of 1/grid_denominator strictly inside the span of the points and
// with a slope change in at least one dimension. Exact labels must match,
// lower bounds hold at their points. Points must be sorted by position.
[[nodiscard]] std::vector<FittingProfile> fit_cpwl_1d_oracle(const std::vector<CrossSectionPoint>& points,
                                                             std::size_t k, long grid_denominator);

}  // namespace ernn
