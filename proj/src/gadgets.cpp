#include "ernn/gadgets.hpp"

#include <algorithm>
#include <mutex>

#include "ernn/errors.hpp"
#include "ernn/linear_feasibility.hpp"
#include "ernn/parallel.hpp"

namespace ernn {

const char* to_string(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::Variable: return "variable";
    case GadgetKind::Inversion: return "inversion";
    case GadgetKind::LowerBound: return "lower_bound";
  }
  return "?";
}

std::vector<TemplateEntry> GadgetTemplate::lines() const {
  std::vector<TemplateEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const auto& e) { return e.is_line(); });
  return out;
}

Rational variable_q_offset() { return Rational(11, 3); }
Rational lower_bound_center() { return Rational(4); }

namespace {

Label2 both(const Label& l) { return {l, l}; }
Label2 exact2(long y1, long y2) { return {Label::exact(y1), Label::exact(y2)}; }

}  // namespace

GadgetTemplate gadget_template(GadgetKind kind, std::array<bool, 2> active) {
  GadgetTemplate t;
  t.kind = kind;
  switch (kind) {
    case GadgetKind::Variable: {
      const long offsets[] = {0, 1, 2, 4, 6, 7, 8, 10, 12, 14, 15, 16};
      const long labels[] = {0, 0, 0, 3, 6, 6, 6, 4, 2, 0, 0, 0};
      for (std::size_t i = 0; i < 12; ++i) {
        if (i == 3) t.entries.push_back({variable_q_offset(), both(Label::at_least(2))});
        t.entries.push_back({offsets[i], exact2(labels[i], labels[i])});
      }
      t.breakline_budget = 4;
      t.width = 16;
      break;
    }
    case GadgetKind::Inversion: {
      const long offsets[] = {0, 1, 2, 4, 7, 9, 10, 11, 13, 15, 17, 18, 19};
      const long dim1[] = {0, 0, 0, 3, 6, 6, 6, 6, 4, 2, 0, 0, 0};
      const long dim2[] = {0, 0, 0, 0, 3, 6, 6, 6, 4, 2, 0, 0, 0};
      for (std::size_t i = 0; i < 13; ++i) t.entries.push_back({offsets[i], exact2(dim1[i], dim2[i])});
      t.breakline_budget = 5;
      t.width = 19;
      break;
    }
    case GadgetKind::LowerBound: {
      if (!active[0] && !active[1]) throw InvalidState("lower bound gadget without an active dimension");
      t.active = active;
      const long offsets[] = {0, 1, 2, 3, 5, 6, 7, 8};
      const long labels[] = {0, 0, 0, -1, -1, 0, 0, 0};
      for (std::size_t i = 0; i < 8; ++i) {
        t.entries.push_back({offsets[i], exact2(active[0] ? labels[i] : 0, active[1] ? labels[i] : 0)});
      }
      t.breakline_budget = 3;
      t.width = 8;
      break;
    }
  }
  return t;
}

bool GadgetPlacement::in_stripe(const Point2& p) const {
  const Rational t = local_offset(p);
  return t.sign() >= 0 && t <= tmpl.width;
}

std::vector<OrientedLine> GadgetPlacement::data_lines() const {
  std::vector<OrientedLine> out;
  for (const auto& e : tmpl.entries) {
    if (e.is_line()) out.push_back(line_at(e.offset));
  }
  return out;
}

GadgetState GadgetState::inversion(const Rational& slope_1) {
  if (slope_1 == Rational(1)) throw InvalidState("inversion slope 1 has no partner");
  return {slope_1, slope_1 / (slope_1 - 1), 0};
}

void validate_state(const GadgetTemplate& tmpl, const GadgetState& state) {
  const Rational lo(3, 2), hi(3);
  auto in_range = [&](const Rational& s) { return s >= lo && s <= hi; };
  switch (tmpl.kind) {
    case GadgetKind::Variable:
      if (!in_range(state.slope_1)) throw InvalidState("variable slope " + state.slope_1.to_string() + " outside [3/2, 3]");
      if (state.slope_2 != state.slope_1) throw InvalidState("variable gadget slopes differ between dimensions");
      break;
    case GadgetKind::Inversion:
      if (!in_range(state.slope_1) || !in_range(state.slope_2)) throw InvalidState("inversion slope outside [3/2, 3]");
      if (state.slope_1 * state.slope_2 != state.slope_1 + state.slope_2) {
        throw InvalidState("inversion slopes violate s1*s2 = s1+s2");
      }
      break;
    case GadgetKind::LowerBound:
      if (state.depth < Rational(2)) throw InvalidState("lower bound depth " + state.depth.to_string() + " below 2");
      break;
  }
}

Value2 profile(const GadgetTemplate& tmpl, const GadgetState& state, const Rational& t) {
  validate_state(tmpl, state);
  switch (tmpl.kind) {
    case GadgetKind::Variable: {
      const Rational& s = state.slope_1;
      const Rational b1 = Rational(4) - Rational(3) / s, b2 = Rational(4) + Rational(3) / s;
      Rational y;
      if (t <= b1 || t >= Rational(14)) y = 0;
      else if (t < b2) y = s * (t - b1);
      else if (t <= Rational(8)) y = 6;
      else y = Rational(14) - t;
      return {y, y};
    }
    case GadgetKind::Inversion: {
      const Rational& sx = state.slope_1;
      const Rational& sy = state.slope_2;
      const Rational b1 = Rational(4) - Rational(3) / sx, b2 = Rational(4) + Rational(3) / sx;
      const Rational b3 = b2 + Rational(6) / sy;
      auto tail = [&](const Rational& x) { return x >= Rational(17) ? Rational(0) : Rational(17) - x; };
      Value2 out;
      if (t <= b1) out.y1 = 0;
      else if (t < b2) out.y1 = sx * (t - b1);
      else if (t <= Rational(11)) out.y1 = 6;
      else out.y1 = tail(t);
      if (t <= b2) out.y2 = 0;
      else if (t < b3) out.y2 = sy * (t - b2);
      else if (t <= Rational(11)) out.y2 = 6;
      else out.y2 = tail(t);
      return out;
    }
    case GadgetKind::LowerBound: {
      const Rational& d = state.depth;
      const Rational u = d / (d - 1);
      const Rational dist = abs(t - lower_bound_center());
      const Rational y = dist >= u ? Rational(0) : -d + (d / u) * dist;
      return {tmpl.active[0] ? y : Rational(0), tmpl.active[1] ? y : Rational(0)};
    }
  }
  return {};
}

Rational measuring_offset(GadgetKind kind, MeasuringSide side, std::size_t dim) {
  const Rational delta = side == MeasuringSide::Upper ? Rational(1) : Rational(-1);
  switch (kind) {
    case GadgetKind::Variable: return Rational(4) + delta;
    case GadgetKind::Inversion: return (dim == 0 ? Rational(4) : Rational(7)) + delta;
    case GadgetKind::LowerBound: break;
  }
  throw NoSuchMeasuringLine("lower bound gadgets have no measuring lines");
}

OrientedLine measuring_line(const GadgetPlacement& placement, MeasuringSide side, std::size_t dim) {
  return placement.line_at(measuring_offset(placement.tmpl.kind, side, dim));
}

std::vector<Ridge> witness_ridges(const GadgetTemplate& tmpl, const GadgetState& state) {
  validate_state(tmpl, state);
  switch (tmpl.kind) {
    case GadgetKind::Variable: {
      const Rational& s = state.slope_1;
      return {{Rational(4) - Rational(3) / s, s, s},
              {Rational(4) + Rational(3) / s, -s, -s},
              {8, -1, -1},
              {14, 1, 1}};
    }
    case GadgetKind::Inversion: {
      const Rational& sx = state.slope_1;
      const Rational& sy = state.slope_2;
      const Rational b2 = Rational(4) + Rational(3) / sx;
      return {{Rational(4) - Rational(3) / sx, sx, 0},
              {b2, -sx, sy},
              {b2 + Rational(6) / sy, 0, -sy},
              {11, -1, -1},
              {17, 1, 1}};
    }
    case GadgetKind::LowerBound: {
      const Rational& d = state.depth;
      const Rational u = d / (d - 1);
      const Rational slope = d / u;
      const Rational k1 = tmpl.active[0] ? Rational(1) : Rational(0);
      const Rational k2 = tmpl.active[1] ? Rational(1) : Rational(0);
      return {{lower_bound_center() - u, -slope * k1, -slope * k2},
              {lower_bound_center(), 2 * slope * k1, 2 * slope * k2},
              {lower_bound_center() + u, -slope * k1, -slope * k2}};
    }
  }
  return {};
}

std::vector<HiddenNeuron> witness_neurons(const GadgetPlacement& placement, const GadgetState& state) {
  std::vector<HiddenNeuron> out;
  for (const auto& r : witness_ridges(placement.tmpl, state)) {
    out.push_back({placement.normal.n1(), placement.normal.n2(), -(placement.base_offset + r.at), r.c1, r.c2});
  }
  return out;
}

std::vector<CrossSectionPoint> cross_section(const GadgetTemplate& tmpl) {
  std::vector<CrossSectionPoint> out;
  for (const auto& e : tmpl.entries) out.push_back({e.offset, e.label});
  return out;
}

Rational FittingProfile::evaluate(std::size_t dim, const Rational& x) const {
  std::size_t piece = 0;
  while (piece + 2 < nodes.size() && x > nodes[piece + 1]) ++piece;
  return values[dim][piece] + slopes[dim][piece] * (x - nodes[piece]);
}

namespace {

// Exact points of one dimension inside a closed piece; collinear or not.
struct PieceFit {
  bool collinear = true;
  bool determined = false;  // at least two distinct positions
  Rational slope, intercept;
};

class Oracle {
 public:
  Oracle(const std::vector<CrossSectionPoint>& points, std::size_t k, long g) : points_(points), k_(k) {
    lo_ = points.front().x;
    hi_ = points.back().x;
    for (Rational c = floor(lo_ * g) / g + Rational(1, g);; c += Rational(1, g)) {
      if (c <= lo_) continue;
      if (c >= hi_) break;
      candidates_.push_back(c);
    }
  }

  std::vector<FittingProfile> run() {
    std::vector<FittingProfile> all;
    if (k_ == 0) {
      std::vector<Rational> chosen;
      leaf(chosen, all);
      return all;
    }
    std::vector<std::vector<FittingProfile>> per_first(candidates_.size());
    parallel_for(candidates_.size(), [&](std::size_t i) {
      std::vector<Rational> chosen{candidates_[i]};
      std::array<PieceFit, 2> prev{};
      if (!close_piece(lo_, candidates_[i], prev, prev, true)) return;
      dfs(i + 1, chosen, prev, per_first[i]);
    });
    for (auto& v : per_first) {
      for (auto& p : v) all.push_back(std::move(p));
    }
    std::sort(all.begin(), all.end());
    return all;
  }

 private:
  PieceFit fit_piece(const Rational& a, const Rational& b, std::size_t dim) const {
    PieceFit fit;
    const CrossSectionPoint* first = nullptr;
    for (const auto& p : points_) {
      if (p.x < a || p.x > b || !p.label[dim].is_exact()) continue;
      if (!first) {
        first = &p;
        continue;
      }
      if (p.x == first->x) {
        if (p.label[dim].value != first->label[dim].value) fit.collinear = false;
        continue;
      }
      const Rational slope = (p.label[dim].value - first->label[dim].value) / (p.x - first->x);
      if (!fit.determined) {
        fit.determined = true;
        fit.slope = slope;
        fit.intercept = first->label[dim].value - slope * first->x;
      } else if (slope != fit.slope) {
        fit.collinear = false;
        break;
      }
    }
    return fit;
  }

  // Fits the closed piece [a, b] in both dimensions and checks it against the
  // previous piece at their shared node a.
  bool close_piece(const Rational& a, const Rational& b, const std::array<PieceFit, 2>& prev,
                   std::array<PieceFit, 2>& out, bool first_piece) const {
    for (std::size_t dim = 0; dim < 2; ++dim) {
      const PieceFit fit = fit_piece(a, b, dim);
      if (!fit.collinear) return false;
      if (!first_piece && fit.determined && prev[dim].determined &&
          fit.slope * a + fit.intercept != prev[dim].slope * a + prev[dim].intercept) {
        return false;
      }
      out[dim] = fit;
    }
    return true;
  }

  void dfs(std::size_t next, std::vector<Rational>& chosen, const std::array<PieceFit, 2>& prev,
           std::vector<FittingProfile>& out) const {
    if (chosen.size() == k_) {
      std::array<PieceFit, 2> last{};
      if (close_piece(chosen.back(), hi_, prev, last, false)) leaf(chosen, out);
      return;
    }
    const std::size_t remaining = k_ - chosen.size();
    for (std::size_t i = next; i + remaining <= candidates_.size(); ++i) {
      std::array<PieceFit, 2> fit{};
      if (!close_piece(chosen.back(), candidates_[i], prev, fit, false)) continue;
      chosen.push_back(candidates_[i]);
      dfs(i + 1, chosen, fit, out);
      chosen.pop_back();
    }
  }

  // Solves for the node values of one dimension. Returns false if infeasible.
  bool solve_dim(const std::vector<Rational>& nodes, std::size_t dim, std::vector<Rational>& values,
                 bool& determined) const {
    const std::size_t n = nodes.size();
    // Interpolation weights of every point over the node values.
    auto weights = [&](const Rational& x) {
      std::vector<Rational> w(n, Rational(0));
      std::size_t i = 0;
      while (i + 2 < n && x > nodes[i + 1]) ++i;
      const Rational len = nodes[i + 1] - nodes[i];
      w[i] = (nodes[i + 1] - x) / len;
      w[i + 1] = (x - nodes[i]) / len;
      return w;
    };
    std::vector<std::vector<Rational>> rows;  // augmented [w | y]
    std::vector<std::pair<std::vector<Rational>, Rational>> bounds;
    for (const auto& p : points_) {
      auto w = weights(p.x);
      if (p.label[dim].is_exact()) {
        w.push_back(p.label[dim].value);
        rows.push_back(std::move(w));
      } else {
        bounds.emplace_back(std::move(w), p.label[dim].value);
      }
    }
    // Reduced row echelon form.
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
      std::size_t piv = r;
      while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[r], rows[piv]);
      const Rational inv = Rational(1) / rows[r][c];
      for (auto& v : rows[r]) v *= inv;
      for (std::size_t o = 0; o < rows.size(); ++o) {
        if (o == r || rows[o][c].is_zero()) continue;
        const Rational f = rows[o][c];
        for (std::size_t j = c; j <= n; ++j) rows[o][j] -= f * rows[r][j];
      }
      pivot_col.push_back(c);
      ++r;
    }
    for (std::size_t o = r; o < rows.size(); ++o) {
      if (!rows[o][n].is_zero()) return false;
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) free_cols.push_back(c);
    }
    determined = free_cols.empty();
    // node value = const + sum coeff * free
    std::vector<std::vector<Rational>> affine(n, std::vector<Rational>(free_cols.size() + 1, Rational(0)));
    for (std::size_t f = 0; f < free_cols.size(); ++f) affine[free_cols[f]][f] = 1;
    for (std::size_t i = 0; i < r; ++i) {
      auto& a = affine[pivot_col[i]];
      a.back() = rows[i][n];
      for (std::size_t f = 0; f < free_cols.size(); ++f) a[f] = -rows[i][free_cols[f]];
    }
    std::vector<Rational> free_values(free_cols.size(), Rational(0));
    if (!free_cols.empty()) {
      // w . values >= y  <=>  -(w . affine) . free <= w . const - y
      std::vector<LinearConstraint> cons;
      for (const auto& [w, y] : bounds) {
        LinearConstraint c{std::vector<Rational>(free_cols.size(), Rational(0)), -y, false};
        for (std::size_t j = 0; j < n; ++j) {
          if (w[j].is_zero()) continue;
          for (std::size_t f = 0; f < free_cols.size(); ++f) c.coeffs[f] -= w[j] * affine[j][f];
          c.rhs += w[j] * affine[j].back();
        }
        cons.push_back(std::move(c));
      }
      auto point = find_feasible_point(cons, free_cols.size());
      if (!point) return false;
      free_values = std::move(*point);
    }
    values.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = affine[j].back();
      for (std::size_t f = 0; f < free_cols.size(); ++f) v += affine[j][f] * free_values[f];
      values[j] = std::move(v);
    }
    for (const auto& [w, y] : bounds) {
      Rational v(0);
      for (std::size_t j = 0; j < n; ++j) v += w[j] * values[j];
      if (v < y) return false;
    }
    return true;
  }

  void leaf(const std::vector<Rational>& chosen, std::vector<FittingProfile>& out) const {
    std::vector<Rational> nodes{lo_};
    nodes.insert(nodes.end(), chosen.begin(), chosen.end());
    nodes.push_back(hi_);
    FittingProfile prof;
    prof.breakpoints = chosen;
    prof.nodes = nodes;
    for (std::size_t dim = 0; dim < 2; ++dim) {
      bool determined = true;
      if (!solve_dim(nodes, dim, prof.values[dim], determined)) return;
      prof.determined = prof.determined && determined;
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        prof.slopes[dim].push_back((prof.values[dim][i + 1] - prof.values[dim][i]) / (nodes[i + 1] - nodes[i]));
      }
    }
    for (std::size_t b = 0; b < chosen.size(); ++b) {
      if (prof.slope_change(0, b).is_zero() && prof.slope_change(1, b).is_zero()) return;
    }
    out.push_back(std::move(prof));
  }

  const std::vector<CrossSectionPoint>& points_;
  std::size_t k_;
  Rational lo_, hi_;
  std::vector<Rational> candidates_;
};

}  // namespace

std::vector<FittingProfile> fit_cpwl_1d_oracle(const std::vector<CrossSectionPoint>& points, std::size_t k,
                                               long grid_denominator) {
  if (grid_denominator < 1) throw std::invalid_argument("grid denominator must be >= 1");
  if (points.empty()) return {};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].x < points[i - 1].x) throw std::invalid_argument("cross-section points must be sorted");
  }
  return Oracle(points, k, grid_denominator).run();
}

}  // namespace ernn
