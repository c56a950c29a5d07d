#include <random>
#include <set>

#include "doctest.h"
#include "ernn/errors.hpp"
#include "ernn/layout.hpp"

using namespace ernn;

namespace {

using Kind = PlacementRole::Kind;

std::size_t lines_of(const Layout& l) {
  std::size_t n = 0;
  for (const auto& g : l.gadgets) {
    for (const auto& e : g.placement.tmpl.entries) n += e.is_line() ? 1 : 0;
  }
  return n;
}

// Distance test done by hand instead of through GadgetPlacement.
bool inside(const PlacedGadget& g, const Point2& p) {
  const auto& n = g.placement.normal;
  const Rational t = n.n1() * p.x1 + n.n2() * p.x2 - g.placement.base_offset;
  return t >= 0 && t <= g.placement.tmpl.width;
}

EtrInvFormula random_formula(std::mt19937_64& rng) {
  const char* names[] = {"A", "B", "C", "D"};
  std::uniform_int_distribution<int> var(0, 3), kind(0, 1), count(1, 3);
  std::vector<EtrConstraint> cs;
  for (int i = count(rng); i > 0; --i) {
    if (kind(rng)) {
      cs.push_back(AddConstraint{names[var(rng)], names[var(rng)], names[var(rng)]});
    } else {
      cs.push_back(InvConstraint{names[var(rng)], names[var(rng)]});
    }
  }
  return EtrInvFormula(std::move(cs));
}

}  // namespace

TEST_CASE("layout counts for one inversion") {
  const Layout l = plan(parse_formula("inv X Y"));
  CHECK(l.count(Kind::Canonical) == 2);
  CHECK(l.count(Kind::InversionGadget) == 1);
  CHECK(l.count(Kind::AdditionCopy) == 0);
  CHECK(l.count(Kind::LowerBound) == 4);
  CHECK(l.points.size() == 4);
  CHECK(lines_of(l) == 69);
  CHECK(l.data_line_count() == 69);
  CHECK(realize(l).size() == 211);

  std::size_t weak = 0;
  for (const auto& p : l.points) {
    if (!p.is_weak()) continue;
    ++weak;
    REQUIRE(p.lower_bound);
    const auto& lb = l.gadgets[*p.lower_bound];
    CHECK(lb.role.kind == Kind::LowerBound);
    CHECK(lb.placement.local_offset(p.x) == 4);
    CHECK(lb.placement.tmpl.active == std::array<bool, 2>{!p.label[0].is_exact(), !p.label[1].is_exact()});
  }
  CHECK(weak == 4);
}

TEST_CASE("layout counts for one addition") {
  const Layout l = plan(parse_formula("add X Y Z"));
  CHECK(l.count(Kind::Canonical) == 3);
  CHECK(l.count(Kind::AdditionCopy) == 3);
  CHECK(l.count(Kind::LowerBound) == 6);
  const std::size_t m = 4 * 6 + 3 * 6;
  CHECK(m == 42);
  // 6 weak q points, 3 copy points, 1 addition point.
  CHECK(l.points.size() == 10);

  const auto sum = std::find_if(l.points.begin(), l.points.end(),
                                [](const auto& p) { return p.purpose == PointPurpose::Addition; });
  REQUIRE(sum != l.points.end());
  CHECK(sum->label == Label2{Label::exact(10), Label::exact(10)});
  CHECK(sum->anchors.size() == 3);
  for (const auto& a : sum->anchors) CHECK(l.gadgets[a.gadget].role.kind == Kind::AdditionCopy);
  CHECK(l.gadgets[sum->anchors[0].gadget].placement.local_offset(sum->x) == 5);
  CHECK(l.gadgets[sum->anchors[1].gadget].placement.local_offset(sum->x) == 5);
  CHECK(l.gadgets[sum->anchors[2].gadget].placement.local_offset(sum->x) == 3);
}

TEST_CASE("copy points sit on the canonical upper line and the copy lower line") {
  const Layout l = plan(parse_formula("add X X Y\ninv Y Z"));
  for (const auto& p : l.points) {
    if (p.purpose != PointPurpose::Copy && p.purpose != PointPurpose::InversionCopy) continue;
    REQUIRE(p.anchors.size() >= 2);
    const auto& canon = l.gadgets[p.anchors[0].gadget];
    CHECK(canon.role.kind == Kind::Canonical);
    CHECK(canon.placement.local_offset(p.x) == 5);
    const auto& other = l.gadgets[p.anchors[1].gadget];
    if (p.purpose == PointPurpose::Copy) {
      CHECK(other.placement.local_offset(p.x) == 3);
      CHECK(p.label == Label2{Label::exact(6), Label::exact(6)});
    } else {
      CHECK(other.placement.local_offset(p.x) == (p.dim == 0 ? 3 : 6));
      CHECK(p.label[p.dim] == Label::exact(6));
      CHECK(p.label[1 - p.dim] == Label::at_least(0));
    }
  }
}

TEST_CASE("validation") {
  SUBCASE("default spacing validates") {
    for (const char* text : {"inv X X", "add X Y Z", "inv X Y\nadd X Y Z", "add A A B\ninv B C\ninv C A"}) {
      const Layout l = plan(parse_formula(text));
      const auto report = validate(l);
      CHECK_MESSAGE(report.ok(), text << ": " << report.summary());
      CHECK(report.alpha > report.w);
      CHECK(l.verticals[1] == l.verticals[0] + 1);
      CHECK(l.verticals[2] == l.verticals[0] + 2);
    }
  }
  SUBCASE("tiny spacing fails") {
    LayoutConfig cfg;
    cfg.spacing = 10;
    CHECK_THROWS_AS((void)plan(parse_formula("add X Y Z\ninv X Y"), cfg), PlacementFailure);
    CHECK_FALSE(validate(plan_unchecked(parse_formula("add X Y Z\ninv X Y"), cfg)).ok());
  }
  SUBCASE("vertical data lines are rejected") {
    Layout l = plan(parse_formula("inv X Y"));
    l.gadgets[0].placement.normal = palette::vertical_line();
    const auto report = validate(l);
    CHECK(std::any_of(report.violations.begin(), report.violations.end(),
                      [](const auto& v) { return v.check == 'a'; }));
    CHECK_THROWS_AS((void)realize(l), RealizationFailure);
  }
  SUBCASE("overlapping parallel stripes are rejected") {
    Layout l = plan(parse_formula("inv X Y"));
    l.gadgets[1].placement.base_offset = l.gadgets[0].placement.base_offset + 16;
    const auto report = validate(l);
    CHECK(std::any_of(report.violations.begin(), report.violations.end(),
                      [](const auto& v) { return v.check == 'b'; }));
  }
  SUBCASE("moved point breaks its anchor") {
    Layout l = plan(parse_formula("inv X Y"));
    l.points[0].x.x2 += Rational(1, 7);
    const auto report = validate(l);
    CHECK(std::any_of(report.violations.begin(), report.violations.end(),
                      [](const auto& v) { return v.check == 'e'; }));
  }
  SUBCASE("verticals left of the intersections are rejected") {
    Layout l = plan(parse_formula("add X Y Z"));
    l.verticals = {Rational(0), Rational(1), Rational(2)};
    const auto report = validate(l);
    CHECK(std::any_of(report.violations.begin(), report.violations.end(),
                      [](const auto& v) { return v.check == 'd'; }));
  }
}

TEST_CASE("realization") {
  const Layout l = plan(parse_formula("add X Y Z\ninv Z W"));
  const auto pts = realize(l);
  CHECK(pts.size() == 3 * lines_of(l) + l.points.size());

  // First gadget is canonical: 12 lines on three verticals.
  const auto& g0 = l.gadgets[0].placement;
  std::size_t i = 0;
  for (const auto& e : g0.tmpl.entries) {
    if (!e.is_line()) continue;
    for (int v = 0; v < 3; ++v, ++i) {
      CHECK(pts[i].x.x1 == l.verticals[v]);
      CHECK(g0.local_offset(pts[i].x) == e.offset);
      CHECK(pts[i].y == Value2{e.label[0].value, e.label[1].value});
    }
  }
  CHECK(i == 36);

  const std::size_t tail = pts.size() - l.points.size();
  for (std::size_t j = 0; j < l.points.size(); ++j) {
    const auto& p = l.points[j];
    CHECK(pts[tail + j].x == p.x);
    for (std::size_t d = 0; d < 2; ++d) {
      const Rational want = p.label[d].is_exact() ? p.label[d].value : p.label[d].value - 2;
      CHECK(pts[tail + j].y[d] == want);
    }
  }

  // Independent check: every realized point is in its own stripes only.
  std::size_t k = 0;
  for (std::size_t g = 0; g < l.gadgets.size(); ++g) {
    for (std::size_t n = 3 * l.gadgets[g].placement.tmpl.lines().size(); n > 0; --n, ++k) {
      for (std::size_t h = 0; h < l.gadgets.size(); ++h) CHECK((h == g) == inside(l.gadgets[h], pts[k].x));
    }
  }
  for (const auto& p : l.points) {
    std::set<std::size_t> own;
    for (const auto& a : p.anchors) own.insert(a.gadget);
    for (std::size_t h = 0; h < l.gadgets.size(); ++h) CHECK(own.count(h) == (inside(l.gadgets[h], p.x) ? 1 : 0));
  }
  for (const auto& pr : l.probes) {
    for (std::size_t h = 0; h < l.gadgets.size(); ++h) CHECK((h == pr.gadget) == inside(l.gadgets[h], pr.x));
    CHECK(l.gadgets[pr.gadget].placement.local_offset(pr.x) == 5);
  }
}

TEST_CASE("planning is deterministic") {
  const auto f = parse_formula("add A B C\ninv A B\ninv C C");
  const auto a = realize(plan(f));
  const auto b = realize(plan(f));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("random formulas plan and validate") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 12; ++round) {
    const auto f = random_formula(rng);
    const Layout l = plan(f);
    CHECK_MESSAGE(validate(l).ok(), f.to_text());
    const std::size_t V = f.variables().size() + 3 * f.addition_count();
    const std::size_t I = f.inversion_count();
    const std::size_t L = V + 2 * I;
    CHECK(l.count(Kind::Canonical) + l.count(Kind::AdditionCopy) == V);
    CHECK(l.count(Kind::LowerBound) == L);
    CHECK(realize(l).size() == 3 * (12 * V + 13 * I + 8 * L) + L + 4 * f.addition_count());
  }
}
