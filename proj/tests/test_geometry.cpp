#include <random>

#include "doctest.h"
#include "ernn/errors.hpp"
#include "ernn/geometry.hpp"
#include "ernn/rational.hpp"

using namespace ernn;

namespace {

Rational random_rational(std::mt19937_64& rng, long range, long den) {
  std::uniform_int_distribution<long> num(-range * den, range * den);
  std::uniform_int_distribution<long> d(1, den);
  return Rational(num(rng), d(rng));
}

}  // namespace

TEST_CASE("rational parse and print") {
  CHECK(Rational::parse("3/6").to_string() == "1/2");
  CHECK(Rational::parse("-4/2").to_string() == "-2");
  CHECK(Rational::parse("0").to_string() == "0");
  CHECK(Rational::parse("7").is_integer());
  CHECK_THROWS_AS((void)Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS((void)Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS((void)Rational::parse(""), std::invalid_argument);
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(-3, 2).denominator() == 2);
  CHECK_THROWS((void)(Rational(1) / Rational(0)));
}

TEST_CASE("rational floor, ceil, sqrt") {
  CHECK(floor(Rational(-3, 2)) == Rational(-2));
  CHECK(ceil(Rational(-3, 2)) == Rational(-1));
  CHECK(ceil(Rational(4)) == Rational(4));
  CHECK(*Rational(9, 4).exact_sqrt() == Rational(3, 2));
  CHECK_FALSE(Rational(2).exact_sqrt().has_value());
  CHECK_FALSE(Rational(-1).exact_sqrt().has_value());
}

TEST_CASE("make_direction") {
  CHECK(make_direction(0, 1).n2() == Rational(1));
  CHECK(make_direction(Rational(3, 5), Rational(4, 5)).n1() == Rational(3, 5));
  CHECK_THROWS_AS((void)make_direction(Rational(1, 2), Rational(1, 2)), NotUnit);
}

TEST_CASE("signed_value") {
  const OrientedLine horizontal{make_direction(0, 1), 0};
  CHECK(signed_value(horizontal, {5, 3}) == Rational(3));
  const OrientedLine slanted{make_direction(Rational(3, 5), Rational(4, 5)), 0};
  CHECK(signed_value(slanted, {3, 4}) == Rational(5));
  CHECK(signed_value(slanted, {4, -3}) == Rational(0));
}

TEST_CASE("intersect") {
  const OrientedLine x1_zero{make_direction(1, 0), 0};
  const OrientedLine x2_zero{make_direction(0, 1), 0};
  CHECK(*intersect(x1_zero, x2_zero) == Point2{0, 0});
  CHECK_FALSE(intersect(OrientedLine{make_direction(0, 1), 1}, OrientedLine{make_direction(0, 1), 2}).has_value());
  const OrientedLine a{make_direction(Rational(3, 5), Rational(4, 5)), 5};
  const OrientedLine b{make_direction(0, 1), 4};
  CHECK(*intersect(a, b) == Point2{3, 4});
}

TEST_CASE("palette normals are unit") {
  for (const Direction& d : {palette::horizontal_stripe(), palette::vertical_line(), palette::copy_normal(0),
                             palette::copy_normal(1), palette::copy_normal(2), palette::copy_normal(5),
                             palette::inversion(), palette::lower_bound()}) {
    CHECK(d.n1() * d.n1() + d.n2() * d.n2() == Rational(1));
  }
}

TEST_CASE("property: distance, symmetry, incidence") {
  std::mt19937_64 rng(11);
  const Direction normals[] = {palette::horizontal_stripe(), palette::copy_normal(0), palette::copy_normal(1),
                               palette::copy_normal(2), palette::inversion(), palette::lower_bound(),
                               palette::vertical_line()};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(normals) - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const OrientedLine l1{normals[pick(rng)], random_rational(rng, 50, 7)};
    const OrientedLine l2{normals[pick(rng)], random_rational(rng, 50, 7)};
    const Point2 p{random_rational(rng, 50, 9), random_rational(rng, 50, 9)};

    // Distance oracle: squared distance to the foot point.
    const Rational s = signed_value(l1, p);
    const Point2 foot{p.x1 - s * l1.normal.n1(), p.x2 - s * l1.normal.n2()};
    CHECK(signed_value(l1, foot) == Rational(0));
    const Rational dx = p.x1 - foot.x1, dy = p.x2 - foot.x2;
    CHECK(dx * dx + dy * dy == s * s);

    const auto ab = intersect(l1, l2);
    const auto ba = intersect(l2, l1);
    CHECK(ab == ba);
    if (ab) {
      CHECK(signed_value(l1, *ab) == Rational(0));
      CHECK(signed_value(l2, *ab) == Rational(0));
    }
  }
}
