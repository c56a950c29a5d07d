#include "ernn/layout.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "ernn/errors.hpp"
#include "ernn/parallel.hpp"

namespace ernn {

const char* to_string(PlacementRole::Kind kind) {
  switch (kind) {
    case PlacementRole::Kind::Canonical: return "canonical";
    case PlacementRole::Kind::AdditionCopy: return "addition_copy";
    case PlacementRole::Kind::InversionGadget: return "inversion";
    case PlacementRole::Kind::LowerBound: return "lower_bound";
  }
  return "?";
}

const char* to_string(PointPurpose purpose) {
  switch (purpose) {
    case PointPurpose::Copy: return "copy";
    case PointPurpose::Addition: return "addition";
    case PointPurpose::InversionCopy: return "inversion_copy";
    case PointPurpose::WeakQ: return "weak_q";
  }
  return "?";
}

Value2 ConstraintPoint::realized_label() const {
  Value2 out;
  for (std::size_t d = 0; d < 2; ++d) out[d] = label[d].is_exact() ? label[d].value : label[d].value - 2;
  return out;
}

std::size_t Layout::count(PlacementRole::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gadgets.begin(), gadgets.end(), [&](const auto& g) { return g.role.kind == kind; }));
}

std::size_t Layout::data_line_count() const {
  std::size_t n = 0;
  for (const auto& g : gadgets) n += g.placement.tmpl.lines().size();
  return n;
}

std::size_t Layout::canonical_gadget(const std::string& variable) const {
  for (std::size_t i = 0; i < gadgets.size(); ++i) {
    if (gadgets[i].role.kind == PlacementRole::Kind::Canonical && gadgets[i].role.variable == variable) return i;
  }
  throw MissingVariable("no canonical gadget for '" + variable + "'");
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << "(" << violations[i].check << ") " << violations[i].message;
  }
  return os.str();
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Point on the line normal . p = offset at height y.
Point2 at_height(const OrientedLine& line, const Rational& y) {
  return {(line.offset - line.normal.n2() * y) / line.normal.n1(), y};
}

Rational height_on_vertical(const OrientedLine& line, const Rational& v) {
  return (line.offset - line.normal.n1() * v) / line.normal.n2();
}

bool parallel(const Direction& a, const Direction& b) { return cross(a.vec(), b.vec()).is_zero(); }

// Largest x over the corners of all pairwise stripe intersections.
std::optional<Rational> rightmost_corner(const std::vector<PlacedGadget>& gadgets) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < gadgets.size(); ++i) {
    const auto& a = gadgets[i].placement;
    for (std::size_t j = i + 1; j < gadgets.size(); ++j) {
      const auto& b = gadgets[j].placement;
      if (parallel(a.normal, b.normal)) continue;
      for (const Rational& ta : {Rational(0), a.tmpl.width}) {
        for (const Rational& tb : {Rational(0), b.tmpl.width}) {
          const auto p = intersect(a.line_at(ta), b.line_at(tb));
          if (p && (!best || p->x1 > *best)) best = p->x1;
        }
      }
    }
  }
  return best;
}

struct AlphaW {
  Rational alpha;
  Rational w;
  bool has_alpha = false;
};

AlphaW alpha_w(const std::vector<PlacedGadget>& gadgets, const Rational& v) {
  std::vector<std::pair<Rational, std::size_t>> ys;
  AlphaW out{0, 0};
  for (std::size_t g = 0; g < gadgets.size(); ++g) {
    std::optional<Rational> lo, hi;
    for (const auto& line : gadgets[g].placement.data_lines()) {
      const Rational y = height_on_vertical(line, v);
      if (!lo || y < *lo) lo = y;
      if (!hi || y > *hi) hi = y;
      ys.emplace_back(y, g);
    }
    if (lo) out.w = max(out.w, *hi - *lo);
  }
  std::sort(ys.begin(), ys.end());
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (ys[i].second == ys[i - 1].second) continue;
    const Rational gap = ys[i].first - ys[i - 1].first;
    if (!out.has_alpha || gap < out.alpha) out.alpha = gap;
    out.has_alpha = true;
  }
  return out;
}

bool alpha_exceeds_w(const AlphaW& aw) { return !aw.has_alpha || aw.alpha > aw.w; }

void place_verticals(Layout& layout) {
  for (const auto& g : layout.gadgets) {
    if (g.placement.normal.n2().is_zero()) {
      layout.verticals = {0, 1, 2};
      return;
    }
  }
  Rational start(0);
  if (auto corner = rightmost_corner(layout.gadgets)) start = ceil(*corner);
  for (const auto& p : layout.points) start = max(start, ceil(p.x.x1));
  Rational gap = layout.config.vertical_margin;
  for (int round = 0; round < 48; ++round) {
    const Rational v1 = start + gap;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) ok = alpha_exceeds_w(alpha_w(layout.gadgets, v1 + i));
    layout.verticals = {v1, v1 + 1, v1 + 2};
    if (ok) return;
    gap *= 2;
  }
}

}  // namespace

Layout plan_unchecked(const EtrInvFormula& f, const LayoutConfig& cfg, int attempt) {
  if (cfg.spacing.sign() <= 0) throw PlacementFailure("spacing must be positive");
  Layout layout;
  layout.config = cfg;
  layout.formula = f;
  const Rational& S = cfg.spacing;
  const auto& vars = f.variables();
  const auto k = static_cast<long>(vars.size());

  const Rational top = Rational(k - 1) * S + 16;
  const Rational add_height = top + S;
  const Rational q_height = add_height + S / 2 + Rational(attempt) * S / 11;
  const Rational band = add_height + 3 * S;
  const Rational probe_dx = S / 8 + Rational(attempt) * S / 17;
  const Rational anchor_shift = Rational(attempt) * S / 7;

  auto canonical_base = [&](std::size_t i) { return Rational(static_cast<long>(i)) * S; };
  for (std::size_t i = 0; i < vars.size(); ++i) {
    layout.gadgets.push_back({{gadget_template(GadgetKind::Variable), palette::horizontal_stripe(), canonical_base(i)},
                              {PlacementRole::Kind::Canonical, vars[i], 0, 0, 0}});
  }
  auto canon = [&](const std::string& v) { return *f.index_of(v); };
  auto upper_y = [&](const std::string& v) { return canonical_base(canon(v)) + 5; };

  // Zone 0: weak points q of the canonical gadgets and the probes.
  Rational zone_left(0);
  const Rational a0 = zone_left + band;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    ConstraintPoint q;
    q.x = {a0, canonical_base(i) + variable_q_offset()};
    q.label = {Label::at_least(2), Label::at_least(2)};
    q.purpose = PointPurpose::WeakQ;
    q.anchors = {{i, variable_q_offset()}};
    layout.points.push_back(std::move(q));
    layout.probes.push_back({vars[i], i, {a0 + probe_dx, canonical_base(i) + 5}});
  }
  zone_left += 2 * band;

  std::vector<ConstraintPoint> copy_qs;
  for (std::size_t c = 0; c < f.constraints().size(); ++c) {
    std::visit(
        overloaded{
            [&](const AddConstraint& add) {
              const Rational a = zone_left + band + anchor_shift;
              const Point2 apex{a, add_height};
              const std::string roles[3] = {add.x, add.y, add.z};
              std::array<std::size_t, 3> copies{};
              for (std::size_t slot = 0; slot < 3; ++slot) {
                const Direction n = palette::copy_normal(slot);
                const Rational measure = slot < 2 ? Rational(5) : Rational(3);
                const Rational base = n.n1() * apex.x1 + n.n2() * apex.x2 - measure;
                copies[slot] = layout.gadgets.size();
                layout.gadgets.push_back({{gadget_template(GadgetKind::Variable), n, base},
                                          {PlacementRole::Kind::AdditionCopy, roles[slot], c, slot, 0}});
                const GadgetPlacement& pl = layout.gadgets.back().placement;

                ConstraintPoint copy;
                copy.x = at_height(pl.line_at(3), upper_y(roles[slot]));
                copy.label = {Label::exact(6), Label::exact(6)};
                copy.purpose = PointPurpose::Copy;
                copy.anchors = {{canon(roles[slot]), 5}, {copies[slot], 3}};
                layout.points.push_back(std::move(copy));

                ConstraintPoint q;
                q.x = at_height(pl.line_at(variable_q_offset()), q_height);
                q.label = {Label::at_least(2), Label::at_least(2)};
                q.purpose = PointPurpose::WeakQ;
                q.anchors = {{copies[slot], variable_q_offset()}};
                copy_qs.push_back(std::move(q));
              }
              ConstraintPoint sum;
              sum.x = apex;
              sum.label = {Label::exact(10), Label::exact(10)};
              sum.purpose = PointPurpose::Addition;
              sum.anchors = {{copies[0], 5}, {copies[1], 5}, {copies[2], 3}};
              layout.points.push_back(std::move(sum));
              for (auto& q : copy_qs) layout.points.push_back(std::move(q));
              copy_qs.clear();
              zone_left += 5 * band;
            },
            [&](const InvConstraint& inv) {
              const Rational a = zone_left + band + anchor_shift;
              const Direction n = palette::inversion();
              const std::size_t g = layout.gadgets.size();
              layout.gadgets.push_back({{gadget_template(GadgetKind::Inversion), n, n.n1() * a},
                                        {PlacementRole::Kind::InversionGadget, "", c, 0, 0}});
              const GadgetPlacement& pl = layout.gadgets.back().placement;
              const std::string vs[2] = {inv.x, inv.y};
              for (std::size_t dim = 0; dim < 2; ++dim) {
                const Rational offset = measuring_offset(GadgetKind::Inversion, MeasuringSide::Lower, dim);
                ConstraintPoint p;
                p.x = at_height(pl.line_at(offset), upper_y(vs[dim]));
                p.label[dim] = Label::exact(6);
                p.label[1 - dim] = Label::at_least(0);
                p.purpose = PointPurpose::InversionCopy;
                p.dim = dim;
                p.anchors = {{canon(vs[dim]), 5}, {g, offset}};
                layout.points.push_back(std::move(p));
              }
              zone_left += 10 * band;
            }},
        f.constraints()[c]);
  }

  // One lower bound gadget per weak point, centred on it.
  for (std::size_t j = 0; j < layout.points.size(); ++j) {
    auto& p = layout.points[j];
    if (!p.is_weak()) continue;
    const Direction n = palette::lower_bound();
    const std::array<bool, 2> active{!p.label[0].is_exact(), !p.label[1].is_exact()};
    const Rational base = n.n1() * p.x.x1 + n.n2() * p.x.x2 - lower_bound_center();
    p.lower_bound = layout.gadgets.size();
    p.anchors.push_back({layout.gadgets.size(), lower_bound_center()});
    layout.gadgets.push_back({{gadget_template(GadgetKind::LowerBound, active), n, base},
                              {PlacementRole::Kind::LowerBound, "", 0, 0, j}});
  }

  place_verticals(layout);
  return layout;
}

Layout plan(const EtrInvFormula& f, const LayoutConfig& cfg) {
  ValidationReport last;
  for (int attempt = 0; attempt < std::max(1, cfg.max_attempts); ++attempt) {
    Layout layout = plan_unchecked(f, cfg, attempt);
    last = validate(layout);
    if (last.ok()) return layout;
  }
  throw PlacementFailure("no valid layout after " + std::to_string(std::max(1, cfg.max_attempts)) +
                         " attempts: " + last.summary());
}

ValidationReport validate(const Layout& layout) {
  ValidationReport report;
  auto fail = [&](char check, std::string message) { report.violations.push_back({check, std::move(message)}); };
  const auto& gs = layout.gadgets;
  auto name = [&](std::size_t g) { return std::string(to_string(gs[g].role.kind)) + " gadget " + std::to_string(g); };

  bool any_vertical = false;
  for (std::size_t g = 0; g < gs.size(); ++g) {
    if (gs[g].placement.normal.n2().is_zero()) {
      any_vertical = true;
      fail('a', name(g) + " has vertical data lines");
    }
  }

  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto& a = gs[i].placement;
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      const auto& b = gs[j].placement;
      if (!parallel(a.normal, b.normal)) continue;
      Rational lo = b.base_offset, hi = b.base_offset + b.tmpl.width;
      if (a.normal != b.normal) {
        lo = -b.base_offset - b.tmpl.width;
        hi = -b.base_offset;
      }
      if (!(hi < a.base_offset || a.base_offset + a.tmpl.width < lo)) {
        fail('b', name(i) + " and " + name(j) + " overlap");
      }
    }
  }

  if (!any_vertical) {
    bool first = true;
    for (const Rational& v : layout.verticals) {
      const AlphaW aw = alpha_w(gs, v);
      if (first || aw.alpha < report.alpha) report.alpha = aw.alpha;
      report.w = max(report.w, aw.w);
      first = false;
      if (!alpha_exceeds_w(aw)) {
        fail('c', "alpha " + aw.alpha.to_string() + " <= w " + aw.w.to_string() + " at x = " + v.to_string());
      }
    }
  }

  if (layout.verticals[1] != layout.verticals[0] + 1 || layout.verticals[2] != layout.verticals[0] + 2) {
    fail('d', "vertical lines are not at unit spacing");
  }
  if (auto corner = rightmost_corner(gs); corner && layout.verticals[0] <= *corner) {
    fail('d', "v1 at " + layout.verticals[0].to_string() + " is not right of stripe intersection at x = " +
                  corner->to_string());
  }

  for (std::size_t j = 0; j < layout.points.size(); ++j) {
    const auto& p = layout.points[j];
    for (const auto& a : p.anchors) {
      if (a.gadget >= gs.size() || gs[a.gadget].placement.local_offset(p.x) != a.offset) {
        fail('e', std::string(to_string(p.purpose)) + " point " + std::to_string(j) + " is off its anchor line");
      }
    }
    for (std::size_t g = 0; g < gs.size(); ++g) {
      const bool own = std::any_of(p.anchors.begin(), p.anchors.end(), [&](const Anchor& a) { return a.gadget == g; });
      if (!own && gs[g].placement.in_stripe(p.x)) {
        fail('f', std::string(to_string(p.purpose)) + " point " + std::to_string(j) + " lies in " + name(g));
      }
    }
  }
  for (const auto& probe : layout.probes) {
    for (std::size_t g = 0; g < gs.size(); ++g) {
      if (g != probe.gadget && gs[g].placement.in_stripe(probe.x)) {
        fail('f', "probe for " + probe.variable + " lies in " + name(g));
      }
    }
  }

  if (!any_vertical) {
    std::vector<std::vector<LayoutViolation>> per_gadget(gs.size());
    parallel_for(gs.size(), [&](std::size_t g) {
      for (const auto& line : gs[g].placement.data_lines()) {
        for (const Rational& v : layout.verticals) {
          const Point2 p{v, height_on_vertical(line, v)};
          for (std::size_t h = 0; h < gs.size(); ++h) {
            if (h != g && gs[h].placement.in_stripe(p)) {
              per_gadget[g].push_back({'f', "vertical-line point of " + name(g) + " lies in " + name(h)});
            }
          }
        }
      }
    });
    for (auto& v : per_gadget) {
      for (auto& violation : v) report.violations.push_back(std::move(violation));
    }
  }
  return report;
}

std::vector<LabeledPoint> realize(const Layout& layout) {
  std::vector<LabeledPoint> out;
  const auto& gs = layout.gadgets;
  for (std::size_t g = 0; g < gs.size(); ++g) {
    const auto& pl = gs[g].placement;
    if (pl.normal.n2().is_zero()) throw RealizationFailure("vertical data line in gadget " + std::to_string(g));
    for (const auto& e : pl.tmpl.entries) {
      if (!e.is_line()) continue;
      const OrientedLine line = pl.line_at(e.offset);
      for (const Rational& v : layout.verticals) {
        const Point2 p{v, height_on_vertical(line, v)};
        for (std::size_t h = 0; h < gs.size(); ++h) {
          if (h != g && gs[h].placement.in_stripe(p)) {
            throw RealizationFailure("vertical-line point of gadget " + std::to_string(g) + " lies in gadget " +
                                     std::to_string(h));
          }
        }
        out.push_back({p, {e.label[0].value, e.label[1].value}});
      }
    }
  }
  for (const auto& p : layout.points) out.push_back({p.x, p.realized_label()});
  return out;
}

}  // namespace ernn
