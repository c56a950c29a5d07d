#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ernn/geometry.hpp"
#include "ernn/rational.hpp"

namespace ernn {

// Output pair (f^1, f^2) or a label.
struct Value2 {
  Rational y1;
  Rational y2;

  friend bool operator==(const Value2&, const Value2&) = default;
  friend auto operator<=>(const Value2&, const Value2&) = default;
  Value2& operator+=(const Value2& o) { y1 += o.y1; y2 += o.y2; return *this; }
  friend Value2 operator+(Value2 a, const Value2& b) { return a += b; }
  friend Value2 operator-(const Value2& a, const Value2& b) { return {a.y1 - b.y1, a.y2 - b.y2}; }
  [[nodiscard]] const Rational& operator[](std::size_t dim) const { return dim == 0 ? y1 : y2; }
  [[nodiscard]] Rational& operator[](std::size_t dim) { return dim == 0 ? y1 : y2; }
};

std::ostream& operator<<(std::ostream& os, const Value2& v);

// ReLU(a1 x1 + a2 x2 + b) feeding c1 into output 1 and c2 into output 2.
struct HiddenNeuron {
  Rational a1, a2, b, c1, c2;

  [[nodiscard]] bool degenerate() const { return a1.is_zero() && a2.is_zero(); }
  [[nodiscard]] Rational activation(const Point2& p) const { return relu(a1 * p.x1 + a2 * p.x2 + b); }
  [[nodiscard]] LineEquation breakline() const { return {{a1, a2}, b}; }

  friend bool operator==(const HiddenNeuron&, const HiddenNeuron&) = default;
};

struct Network {
  std::vector<HiddenNeuron> neurons;

  friend bool operator==(const Network&, const Network&) = default;
};

[[nodiscard]] Value2 evaluate(const Network& net, const Point2& p);

enum class BreaklineType { Concave, Erased, Convex };

[[nodiscard]] const char* to_string(BreaklineType t);

// A breakline with its per-output gradient change (gradient on the positive
// side minus gradient on the negative side). For a ridge the change is a
// multiple of the normal, so its sign along the normal fixes the type.
struct BreaklineDescriptor {
  LineEquation line;  // positive side: line.value_at(p) > 0
  Vec2 grad_change_1;
  Vec2 grad_change_2;

  [[nodiscard]] BreaklineType type(std::size_t dim) const;
  [[nodiscard]] const Vec2& grad_change(std::size_t dim) const { return dim == 0 ? grad_change_1 : grad_change_2; }
};

// Piecewise-linear function given as a ridge sum over oriented breaklines;
// every descriptor's negative side faces the all-zero cell.
struct CpwlSpec {
  std::vector<BreaklineDescriptor> breaklines;
};

// Direct evaluation: sum over breaklines of max(0, line(p)) times the
// gradient-change magnitude, per output.
[[nodiscard]] Value2 evaluate(const CpwlSpec& spec, const Point2& p);

// True iff each output's gradient changes sum to the zero vector, i.e. the
// function is zero again beyond all breaklines.
[[nodiscard]] bool gradient_changes_balanced(const CpwlSpec& spec);

// One neuron per breakline, inactive towards the zero cell. Throws InvalidSpec
// if a gradient change is not normal to its line, a line is degenerate, or the
// open zero cell (negative side of every line) is empty.
[[nodiscard]] Network cpwl_to_network(const CpwlSpec& spec);

// One descriptor per distinct non-degenerate breakline; neurons on the same
// line are merged by summing their gradient changes. Order follows the first
// neuron on each line.
[[nodiscard]] std::vector<BreaklineDescriptor> breaklines(const Network& net);

// Indices of neurons with a1 = a2 = 0; legal but constant.
[[nodiscard]] std::vector<std::size_t> degenerate_neurons(const Network& net);

struct LabeledPoint {
  Point2 x;
  Value2 y;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

struct TrainInstance {
  std::size_t hidden_count = 0;
  Rational gamma{0};
  std::vector<LabeledPoint> points;

  friend bool operator==(const TrainInstance&, const TrainInstance&) = default;
};

struct PointViolation {
  std::size_t index;
  Value2 residual;  // f(x) - y
};

struct FitReport {
  bool fits = true;
  std::vector<PointViolation> violations;
  Rational squared_error{0};
};

// Exact evaluation at every point; squared error is the diagnostic total.
[[nodiscard]] FitReport exact_fit(const Network& net, const TrainInstance& inst);

// Max over arrangement cells and both outputs of the squared Euclidean norm
// of the gradient. Cells are enumerated exactly from the breakline vertices
// inside a box that meets every cell.
[[nodiscard]] Rational max_gradient_norm_bound(const Network& net);

}  // namespace ernn
