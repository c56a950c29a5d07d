#include <chrono>

#include "doctest.h"
#include "ernn/errors.hpp"
#include "ernn/etr_inv.hpp"

using namespace ernn;

TEST_CASE("parse_formula") {
  const auto f = parse_formula("inv X Y");
  CHECK(f.variables() == std::vector<std::string>{"X", "Y"});
  REQUIRE(f.constraints().size() == 1);
  CHECK(std::get<InvConstraint>(f.constraints()[0]) == InvConstraint{"X", "Y"});

  const auto g = parse_formula("add X Y Z\ninv X W");
  CHECK(g.variables() == std::vector<std::string>{"X", "Y", "Z", "W"});
  CHECK(g.addition_count() == 1);
  CHECK(g.inversion_count() == 1);

  const auto h = parse_formula("# comment\n\n  add A B C   # trailing\n");
  CHECK(h.constraints().size() == 1);
  CHECK(parse_formula(h.to_text()) == h);
}

TEST_CASE("parse_formula errors carry positions") {
  try {
    (void)parse_formula("inv X Y\nadd X Y");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  try {
    (void)parse_formula("mul X Y Z");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS((void)parse_formula("inv X Y Z"), SyntaxError);
  CHECK_THROWS_AS((void)parse_formula("# nothing\n"), SyntaxError);
  CHECK_THROWS_AS((void)parse_formula("inv X 3"), SyntaxError);
}

TEST_CASE("assignments") {
  const auto a = parse_assignment("X = 2\nY = 1/2 # half\n");
  CHECK(a.at("X") == Rational(2));
  CHECK(a.at("Y") == Rational(1, 2));
  CHECK_THROWS_AS((void)parse_assignment("X = 1\nX = 2"), SyntaxError);
  CHECK_THROWS_AS((void)parse_assignment("X 1"), SyntaxError);
  CHECK_THROWS_AS((void)parse_assignment("X = 1/0"), SyntaxError);
  const auto f = parse_formula("inv Y X");
  CHECK(format_assignment(f, a) == "Y = 1/2\nX = 2\n");
}

TEST_CASE("check_assignment") {
  const auto inv = parse_formula("inv X Y");
  CHECK(check_assignment(inv, {{"X", 2}, {"Y", Rational(1, 2)}}).satisfied);
  const auto bad = check_assignment(inv, {{"X", 2}, {"Y", 2}});
  CHECK_FALSE(bad.satisfied);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].residual == Rational(3));

  const auto add = parse_formula("add X Y Z");
  CHECK(check_assignment(add, {{"X", 1}, {"Y", Rational(1, 2)}, {"Z", Rational(3, 2)}}).satisfied);
  CHECK_THROWS_AS((void)check_assignment(add, {{"X", 1}}), MissingVariable);

  const auto out = check_assignment(inv, {{"X", 4}, {"Y", Rational(1, 4)}});
  CHECK_FALSE(out.satisfied);
  CHECK(out.violations.empty());
  CHECK(out.out_of_range.size() == 2);
}

TEST_CASE("promise_grid") {
  const auto g = promise_grid(2);
  // 1/2, 1, 3/2, 2
  REQUIRE(g.size() == 4);
  CHECK(g.front() == Rational(1, 2));
  CHECK(g.back() == Rational(2));
  CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("grid_solve") {
  const auto x = grid_solve(parse_formula("inv X X"), 4);
  REQUIRE(x.has_value());
  CHECK(x->at("X") == Rational(1));

  const auto add = grid_solve(parse_formula("add X Y Z"), 2);
  REQUIRE(add.has_value());
  CHECK(add->at("X") == Rational(1, 2));
  CHECK(add->at("Y") == Rational(1, 2));
  CHECK(add->at("Z") == Rational(1));

  CHECK_FALSE(grid_solve(parse_formula("add X X Y\ninv X Y"), 30).has_value());
}

TEST_CASE("grid_solve matches brute-force enumeration") {
  // Oracle: enumerate the full product grid in lexicographic order.
  const char* corpus[] = {"add X Y Z", "inv X Y\nadd X X Z", "add X Y Z\ninv X W", "inv X Y\ninv Y Z\nadd X Z W"};
  for (const char* text : corpus) {
    const auto f = parse_formula(text);
    const auto grid = promise_grid(3);
    const std::size_t k = f.variables().size();
    std::optional<Assignment> expected;
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      Assignment a;
      for (std::size_t i = 0; i < k; ++i) a[f.variables()[i]] = grid[idx[i]];
      if (check_assignment(f, a).satisfied) {
        expected = a;
        break;
      }
      std::size_t pos = k;
      while (pos > 0 && ++idx[pos - 1] == grid.size()) idx[--pos] = 0;
      if (pos == 0) break;
    }
    const auto got = grid_solve(f, 3);
    CHECK(got == expected);
    if (got) CHECK(check_assignment(f, *got).satisfied);
  }
}
