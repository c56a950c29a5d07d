#include "ernn/network.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "ernn/errors.hpp"
#include "ernn/linear_feasibility.hpp"
#include "ernn/parallel.hpp"

namespace ernn {

std::ostream& operator<<(std::ostream& os, const Value2& v) { return os << "(" << v.y1 << ", " << v.y2 << ")"; }

Value2 evaluate(const Network& net, const Point2& p) {
  Value2 out{Rational(0), Rational(0)};
  for (const auto& n : net.neurons) {
    const Rational act = n.activation(p);
    if (act.is_zero()) continue;
    out.y1 += n.c1 * act;
    out.y2 += n.c2 * act;
  }
  return out;
}

const char* to_string(BreaklineType t) {
  switch (t) {
    case BreaklineType::Concave: return "concave";
    case BreaklineType::Erased: return "erased";
    case BreaklineType::Convex: return "convex";
  }
  return "?";
}

BreaklineType BreaklineDescriptor::type(std::size_t dim) const {
  const int s = dot(grad_change(dim), line.a).sign();
  if (grad_change(dim).is_zero() || s == 0) return BreaklineType::Erased;
  return s > 0 ? BreaklineType::Convex : BreaklineType::Concave;
}

namespace {

// Magnitude mu with change == mu * a; InvalidSpec if the change is not normal.
Rational ridge_magnitude(const Vec2& change, const Vec2& a) {
  if (!cross(change, a).is_zero()) {
    throw InvalidSpec("gradient change is not orthogonal to its breakline");
  }
  return dot(change, a) / norm_squared(a);
}

}  // namespace

Value2 evaluate(const CpwlSpec& spec, const Point2& p) {
  Value2 out{Rational(0), Rational(0)};
  for (const auto& d : spec.breaklines) {
    const Rational side = relu(d.line.value_at(p));
    if (side.is_zero()) continue;
    const Rational aa = norm_squared(d.line.a);
    out.y1 += side * dot(d.grad_change_1, d.line.a) / aa;
    out.y2 += side * dot(d.grad_change_2, d.line.a) / aa;
  }
  return out;
}

bool gradient_changes_balanced(const CpwlSpec& spec) {
  Vec2 sum1{0, 0}, sum2{0, 0};
  for (const auto& d : spec.breaklines) {
    sum1 += d.grad_change_1;
    sum2 += d.grad_change_2;
  }
  return sum1.is_zero() && sum2.is_zero();
}

Network cpwl_to_network(const CpwlSpec& spec) {
  Network net;
  std::vector<LinearConstraint> zero_cell;
  for (const auto& d : spec.breaklines) {
    if (d.line.a.is_zero()) throw InvalidSpec("breakline with zero normal");
    HiddenNeuron n;
    n.a1 = d.line.a.v1;
    n.a2 = d.line.a.v2;
    n.b = d.line.b;
    n.c1 = ridge_magnitude(d.grad_change_1, d.line.a);
    n.c2 = ridge_magnitude(d.grad_change_2, d.line.a);
    net.neurons.push_back(std::move(n));
    zero_cell.push_back({{d.line.a.v1, d.line.a.v2}, -d.line.b, true});
  }
  if (!find_feasible_point(zero_cell, 2)) {
    throw InvalidSpec("no cell lies on the negative side of every breakline");
  }
  return net;
}

std::vector<BreaklineDescriptor> breaklines(const Network& net) {
  std::vector<BreaklineDescriptor> out;
  std::map<LineEquation, std::size_t> by_line;
  for (const auto& n : net.neurons) {
    if (n.degenerate()) continue;
    const LineEquation line = n.breakline();
    const LineEquation key = line.canonical();
    const Vec2 change1 = n.c1 * line.a;
    const Vec2 change2 = n.c2 * line.a;
    const auto it = by_line.find(key);
    if (it == by_line.end()) {
      by_line.emplace(key, out.size());
      out.push_back({line, change1, change2});
      continue;
    }
    // Changes are measured from the stored negative side to the positive side.
    auto& d = out[it->second];
    if (dot(d.line.a, line.a).sign() > 0) {
      d.grad_change_1 += change1;
      d.grad_change_2 += change2;
    } else {
      d.grad_change_1 -= change1;
      d.grad_change_2 -= change2;
    }
  }
  return out;
}

std::vector<std::size_t> degenerate_neurons(const Network& net) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    if (net.neurons[i].degenerate()) out.push_back(i);
  }
  return out;
}

FitReport exact_fit(const Network& net, const TrainInstance& inst) {
  std::vector<Value2> residuals(inst.points.size());
  parallel_for(inst.points.size(), [&](std::size_t i) {
    residuals[i] = evaluate(net, inst.points[i].x) - inst.points[i].y;
  });
  FitReport report;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const Value2& r = residuals[i];
    if (r.y1.is_zero() && r.y2.is_zero()) continue;
    report.squared_error += r.y1 * r.y1 + r.y2 * r.y2;
    report.violations.push_back({i, r});
  }
  report.fits = report.violations.empty();
  return report;
}

namespace {

// Upper half-plane first, then counter-clockwise.
bool angle_less(const Vec2& u, const Vec2& v) {
  auto half = [](const Vec2& w) { return w.v2.sign() > 0 || (w.v2.is_zero() && w.v1.sign() > 0) ? 0 : 1; };
  const int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return cross(u, v).sign() > 0;
}

struct Box {
  Rational lo1, hi1, lo2, hi2;

  [[nodiscard]] bool contains(const Point2& p) const {
    return p.x1 >= lo1 && p.x1 <= hi1 && p.x2 >= lo2 && p.x2 <= hi2;
  }
  // Whether moving from boundary point p along d stays in the box.
  [[nodiscard]] bool points_inward(const Point2& p, const Vec2& d) const {
    if (p.x1 == lo1 && d.v1.sign() <= 0) return false;
    if (p.x1 == hi1 && d.v1.sign() >= 0) return false;
    if (p.x2 == lo2 && d.v2.sign() <= 0) return false;
    if (p.x2 == hi2 && d.v2.sign() >= 0) return false;
    return true;
  }
};

}  // namespace

Rational max_gradient_norm_bound(const Network& net) {
  std::vector<const HiddenNeuron*> active;
  for (const auto& n : net.neurons) {
    if (!n.degenerate() && !(n.c1.is_zero() && n.c2.is_zero())) active.push_back(&n);
  }
  if (active.empty()) return Rational(0);

  std::set<LineEquation> unique;
  for (const auto* n : active) unique.insert(n->breakline().canonical());
  std::vector<LineEquation> lines(unique.begin(), unique.end());

  std::vector<Point2> anchors;
  for (const auto& l : lines) {
    const Rational t = -l.b / norm_squared(l.a);
    anchors.push_back({t * l.a.v1, t * l.a.v2});
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (auto p = intersect(lines[i], lines[j])) anchors.push_back(*p);
    }
  }
  Box box{anchors[0].x1, anchors[0].x1, anchors[0].x2, anchors[0].x2};
  for (const auto& p : anchors) {
    box.lo1 = min(box.lo1, p.x1);
    box.hi1 = max(box.hi1, p.x1);
    box.lo2 = min(box.lo2, p.x2);
    box.hi2 = max(box.hi2, p.x2);
  }
  box.lo1 -= 1; box.hi1 += 1; box.lo2 -= 1; box.hi2 += 1;

  std::vector<LineEquation> all = lines;
  all.push_back({{1, 0}, -box.lo1});
  all.push_back({{1, 0}, -box.hi1});
  all.push_back({{0, 1}, -box.lo2});
  all.push_back({{0, 1}, -box.hi2});

  std::set<Point2> vertices;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (auto p = intersect(all[i], all[j]); p && box.contains(*p)) vertices.insert(*p);
    }
  }

  Rational best(0);
  for (const auto& v : vertices) {
    std::vector<Vec2> rays;
    for (const auto& l : all) {
      if (!l.value_at(v).is_zero()) continue;
      const Vec2 along{-l.a.v2, l.a.v1};
      rays.push_back(along);
      rays.push_back({-along.v1, -along.v2});
    }
    std::sort(rays.begin(), rays.end(), angle_less);
    for (std::size_t r = 0; r < rays.size(); ++r) {
      const Vec2& u = rays[r];
      const Vec2& w = rays[(r + 1) % rays.size()];
      if (cross(u, w).sign() == 0) continue;  // coincident rays from parallel copies
      const Vec2 dir = u + w;
      if (!box.points_inward(v, dir)) continue;
      Vec2 g1{0, 0}, g2{0, 0};
      for (const auto* n : active) {
        const Rational s = n->a1 * v.x1 + n->a2 * v.x2 + n->b;
        const bool on = s.sign() > 0 || (s.is_zero() && (n->a1 * dir.v1 + n->a2 * dir.v2).sign() > 0);
        if (!on) continue;
        g1 += Vec2{n->c1 * n->a1, n->c1 * n->a2};
        g2 += Vec2{n->c2 * n->a1, n->c2 * n->a2};
      }
      best = max(best, max(norm_squared(g1), norm_squared(g2)));
    }
  }
  return best;
}

}  // namespace ernn
