#pragma once

#include <optional>
#include <ostream>

#include "ernn/rational.hpp"

namespace ernn {

struct Point2 {
  Rational x1;
  Rational x2;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

std::ostream& operator<<(std::ostream& os, const Point2& p);

// Plain 2-vector; used for gradients and non-unit normals.
struct Vec2 {
  Rational v1;
  Rational v2;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend auto operator<=>(const Vec2&, const Vec2&) = default;

  Vec2& operator+=(const Vec2& o) { v1 += o.v1; v2 += o.v2; return *this; }
  Vec2& operator-=(const Vec2& o) { v1 -= o.v1; v2 -= o.v2; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(const Rational& s, const Vec2& v) { return {s * v.v1, s * v.v2}; }

  [[nodiscard]] bool is_zero() const { return v1.is_zero() && v2.is_zero(); }
};

[[nodiscard]] inline Rational dot(const Vec2& a, const Vec2& b) { return a.v1 * b.v1 + a.v2 * b.v2; }
[[nodiscard]] inline Rational cross(const Vec2& a, const Vec2& b) { return a.v1 * b.v2 - a.v2 * b.v1; }
[[nodiscard]] inline Rational norm_squared(const Vec2& a) { return dot(a, a); }

// Rational unit vector: n1^2 + n2^2 == 1 exactly.
class Direction {
 public:
  [[nodiscard]] const Rational& n1() const { return n1_; }
  [[nodiscard]] const Rational& n2() const { return n2_; }
  [[nodiscard]] Vec2 vec() const { return {n1_, n2_}; }
  [[nodiscard]] Direction flipped() const { return Direction(-n1_, -n2_); }

  friend bool operator==(const Direction&, const Direction&) = default;
  friend Direction make_direction(const Rational& n1, const Rational& n2);

 private:
  Direction(Rational n1, Rational n2) : n1_(std::move(n1)), n2_(std::move(n2)) {}
  Rational n1_;
  Rational n2_;
};

// Throws NotUnit unless n1^2 + n2^2 == 1.
[[nodiscard]] Direction make_direction(const Rational& n1, const Rational& n2);

// { p : normal . p == offset }, positive side normal . p > offset.
struct OrientedLine {
  Direction normal;
  Rational offset;

  friend bool operator==(const OrientedLine&, const OrientedLine&) = default;
};

// normal . p - offset; the Euclidean signed distance since the normal is unit.
[[nodiscard]] Rational signed_value(const OrientedLine& line, const Point2& p);

// Unique intersection point, or nullopt when the lines are parallel.
[[nodiscard]] std::optional<Point2> intersect(const OrientedLine& l1, const OrientedLine& l2);

// Generic line a . p + b == 0 with a != 0. Neuron breaklines live here because
// a neuron's weight vector need not have a rational norm.
struct LineEquation {
  Vec2 a;
  Rational b;

  [[nodiscard]] Rational value_at(const Point2& p) const { return a.v1 * p.x1 + a.v2 * p.x2 + b; }
  // Same point set regardless of orientation and scale.
  [[nodiscard]] LineEquation canonical() const;

  friend bool operator==(const LineEquation&, const LineEquation&) = default;
  friend auto operator<=>(const LineEquation&, const LineEquation&) = default;
};

[[nodiscard]] LineEquation to_equation(const OrientedLine& line);
[[nodiscard]] std::optional<Point2> intersect(const LineEquation& l1, const LineEquation& l2);

// Palette of Pythagorean unit normals used for gadget placement.
namespace palette {
[[nodiscard]] Direction horizontal_stripe();  // (0, 1)
[[nodiscard]] Direction vertical_line();      // (1, 0)
[[nodiscard]] Direction copy_normal(std::size_t role);  // cycles (3/5,4/5), (4/5,3/5), (5/13,12/13)
[[nodiscard]] Direction inversion();          // (15/113, -112/113)
[[nodiscard]] Direction lower_bound();        // (12/13, 5/13)
}  // namespace palette

}  // namespace ernn
