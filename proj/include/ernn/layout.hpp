#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ernn/etr_inv.hpp"
#include "ernn/gadgets.hpp"
#include "ernn/geometry.hpp"
#include "ernn/network.hpp"

namespace ernn {

struct PlacementRole {
  enum class Kind { Canonical, AdditionCopy, InversionGadget, LowerBound };
  Kind kind = Kind::Canonical;
  std::string variable;        // Canonical, AdditionCopy
  std::size_t constraint = 0;  // AdditionCopy, InversionGadget: index into the formula
  std::size_t slot = 0;        // AdditionCopy: 0 for X, 1 for Y, 2 for Z
  std::size_t owner = 0;       // LowerBound: index of the constraint point it realizes

  friend bool operator==(const PlacementRole&, const PlacementRole&) = default;
};

[[nodiscard]] const char* to_string(PlacementRole::Kind kind);

struct PlacedGadget {
  GadgetPlacement placement;
  PlacementRole role;
};

// A line a constraint point must lie on: `offset` from the first line of
// gadget `gadget`.
struct Anchor {
  std::size_t gadget = 0;
  Rational offset;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

enum class PointPurpose { Copy, Addition, InversionCopy, WeakQ };

[[nodiscard]] const char* to_string(PointPurpose purpose);

struct ConstraintPoint {
  Point2 x;
  Label2 label;  // lower bounds mark weak points
  PointPurpose purpose = PointPurpose::Copy;
  std::size_t dim = 0;  // InversionCopy: the exact dimension
  std::vector<Anchor> anchors;
  std::optional<std::size_t> lower_bound;  // gadget realizing the weak label

  [[nodiscard]] bool is_weak() const { return !label[0].is_exact() || !label[1].is_exact(); }
  // Ordinary label after conversion: a bound y becomes y - 2.
  [[nodiscard]] Value2 realized_label() const;
};

// Point on a canonical gadget's upper measuring line inside no other stripe.
struct Probe {
  std::string variable;
  std::size_t gadget = 0;
  Point2 x;
};

struct LayoutConfig {
  Rational spacing{1000};
  Rational vertical_margin{1};
  int max_attempts = 8;
};

struct Layout {
  LayoutConfig config;
  EtrInvFormula formula;
  std::vector<PlacedGadget> gadgets;
  std::vector<ConstraintPoint> points;
  std::array<Rational, 3> verticals;  // x coordinates of v1, v2, v3
  std::vector<Probe> probes;

  [[nodiscard]] std::size_t count(PlacementRole::Kind kind) const;
  [[nodiscard]] std::size_t data_line_count() const;
  // Index of the canonical gadget of a variable; throws MissingVariable.
  [[nodiscard]] std::size_t canonical_gadget(const std::string& variable) const;
};

struct LayoutViolation {
  char check;  // 'a' .. 'f'
  std::string message;
};

struct ValidationReport {
  std::vector<LayoutViolation> violations;
  Rational alpha;  // minimum over the vertical lines
  Rational w;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

// Places all gadgets for one attempt without validating. Attempts differ in
// the zone anchors, the probe offset and the height of the copy weak points.
[[nodiscard]] Layout plan_unchecked(const EtrInvFormula& f, const LayoutConfig& cfg, int attempt = 0);

// First attempt that validates; throws PlacementFailure listing the
// violations of the last attempt.
[[nodiscard]] Layout plan(const EtrInvFormula& f, const LayoutConfig& cfg = {});

// Checks: (a) no vertical data line, (b) parallel stripes disjoint, (c) alpha
// > w on every vertical line, (d) vertical lines right of every stripe
// intersection at unit spacing, (e) constraint points on their anchors, (f) no
// constraint point, probe or vertical-line point inside a foreign stripe.
[[nodiscard]] ValidationReport validate(const Layout& layout);

// Data lines become three points on v1, v2, v3 (gadget order, line order,
// then v1..v3), followed by the constraint points with weak labels converted.
// Throws RealizationFailure if a vertical-line point lies in a foreign stripe.
[[nodiscard]] std::vector<LabeledPoint> realize(const Layout& layout);

}  // namespace ernn
