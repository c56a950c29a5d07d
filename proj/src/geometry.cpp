#include "ernn/geometry.hpp"

#include "ernn/errors.hpp"

namespace ernn {

std::ostream& operator<<(std::ostream& os, const Point2& p) {
  return os << "(" << p.x1 << ", " << p.x2 << ")";
}

Direction make_direction(const Rational& n1, const Rational& n2) {
  if (n1 * n1 + n2 * n2 != Rational(1)) {
    throw NotUnit("(" + n1.to_string() + ", " + n2.to_string() + ") is not a unit vector");
  }
  return Direction(n1, n2);
}

Rational signed_value(const OrientedLine& line, const Point2& p) {
  return line.normal.n1() * p.x1 + line.normal.n2() * p.x2 - line.offset;
}

std::optional<Point2> intersect(const OrientedLine& l1, const OrientedLine& l2) {
  return intersect(to_equation(l1), to_equation(l2));
}

LineEquation to_equation(const OrientedLine& line) { return {line.normal.vec(), -line.offset}; }

LineEquation LineEquation::canonical() const {
  const Rational& lead = a.v1.is_zero() ? a.v2 : a.v1;
  if (lead.is_zero()) return *this;
  return {{a.v1 / lead, a.v2 / lead}, b / lead};
}

std::optional<Point2> intersect(const LineEquation& l1, const LineEquation& l2) {
  // Cramer's rule on a1 . p = -b1, a2 . p = -b2.
  const Rational det = cross(l1.a, l2.a);
  if (det.is_zero()) return std::nullopt;
  const Rational x1 = (-l1.b * l2.a.v2 + l2.b * l1.a.v2) / det;
  const Rational x2 = (-l1.a.v1 * l2.b + l2.a.v1 * l1.b) / det;
  return Point2{x1, x2};
}

namespace palette {

Direction horizontal_stripe() { return make_direction(0, 1); }
Direction vertical_line() { return make_direction(1, 0); }

Direction copy_normal(std::size_t role) {
  switch (role % 3) {
    case 0: return make_direction(Rational(3, 5), Rational(4, 5));
    case 1: return make_direction(Rational(4, 5), Rational(3, 5));
    default: return make_direction(Rational(5, 13), Rational(12, 13));
  }
}

Direction inversion() { return make_direction(Rational(15, 113), Rational(-112, 113)); }
Direction lower_bound() { return make_direction(Rational(12, 13), Rational(5, 13)); }

}  // namespace palette

}  // namespace ernn
