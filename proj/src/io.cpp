#include "ernn/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ernn/errors.hpp"

namespace ernn::io {

using json = nlohmann::ordered_json;

namespace {

json rat(const Rational& r) { return r.to_string(); }

Rational rat(const json& j) {
  if (!j.is_string()) throw FormatError("expected a rational string, got " + j.dump());
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

json pair(const Rational& a, const Rational& b) { return json::array({rat(a), rat(b)}); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

const json& pair_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != 2) throw FormatError(std::string("field '") + key + "' must have two entries");
  return v;
}

std::size_t index(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_unsigned()) throw FormatError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

json parse(std::string_view s) {
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Weak labels are written ">=v".
json label(const Label& l) { return l.is_exact() ? l.value.to_string() : ">=" + l.value.to_string(); }

Label label(const json& j) {
  if (!j.is_string()) throw FormatError("label must be a string");
  const std::string s = j.get<std::string>();
  if (s.rfind(">=", 0) == 0) return Label::at_least(rat(json(s.substr(2))));
  return Label::exact(rat(j));
}

template <class E, std::size_t N>
E from_name(const std::string& name, const std::pair<E, const char*> (&table)[N], const char* what) {
  for (const auto& [e, n] : table) {
    if (name == n) return e;
  }
  throw FormatError(std::string("unknown ") + what + " '" + name + "'");
}

constexpr std::pair<GadgetKind, const char*> kGadgetKinds[] = {
    {GadgetKind::Variable, "variable"}, {GadgetKind::Inversion, "inversion"}, {GadgetKind::LowerBound, "lower_bound"}};

using RoleKind = PlacementRole::Kind;
constexpr std::pair<RoleKind, const char*> kRoles[] = {{RoleKind::Canonical, "canonical"},
                                                       {RoleKind::AdditionCopy, "addition_copy"},
                                                       {RoleKind::InversionGadget, "inversion"},
                                                       {RoleKind::LowerBound, "lower_bound"}};

constexpr std::pair<PointPurpose, const char*> kPurposes[] = {{PointPurpose::Copy, "copy"},
                                                              {PointPurpose::Addition, "addition"},
                                                              {PointPurpose::InversionCopy, "inversion_copy"},
                                                              {PointPurpose::WeakQ, "weak_q"}};

}  // namespace

std::string network_to_json(const Network& net) {
  json neurons = json::array();
  for (const auto& n : net.neurons) {
    neurons.push_back({{"a", pair(n.a1, n.a2)}, {"b", rat(n.b)}, {"c", pair(n.c1, n.c2)}});
  }
  return dump({{"neurons", neurons}});
}

Network network_from_json(std::string_view s) {
  const json j = parse(s);
  const json& neurons = field(j, "neurons");
  if (!neurons.is_array()) throw FormatError("'neurons' must be an array");
  Network net;
  for (const auto& n : neurons) {
    const json& a = pair_field(n, "a");
    const json& c = pair_field(n, "c");
    net.neurons.push_back({rat(a[0]), rat(a[1]), rat(field(n, "b")), rat(c[0]), rat(c[1])});
  }
  return net;
}

std::string instance_to_json(const TrainInstance& inst) {
  json points = json::array();
  for (const auto& p : inst.points) points.push_back({{"x", pair(p.x.x1, p.x.x2)}, {"y", pair(p.y.y1, p.y.y2)}});
  return dump({{"hidden_neurons", inst.hidden_count}, {"gamma", rat(inst.gamma)}, {"points", points}});
}

TrainInstance instance_from_json(std::string_view s) {
  const json j = parse(s);
  TrainInstance inst;
  inst.hidden_count = index(j, "hidden_neurons");
  inst.gamma = rat(field(j, "gamma"));
  if (inst.gamma.sign() < 0) throw FormatError("gamma must be non-negative");
  const json& points = field(j, "points");
  if (!points.is_array()) throw FormatError("'points' must be an array");
  for (const auto& p : points) {
    const json& x = pair_field(p, "x");
    const json& y = pair_field(p, "y");
    inst.points.push_back({{rat(x[0]), rat(x[1])}, {rat(y[0]), rat(y[1])}});
  }
  return inst;
}

std::string layout_to_json(const Layout& l) {
  json gadgets = json::array();
  for (const auto& g : l.gadgets) {
    const auto& pl = g.placement;
    gadgets.push_back({{"kind", to_string(pl.tmpl.kind)},
                       {"active", {pl.tmpl.active[0], pl.tmpl.active[1]}},
                       {"normal", pair(pl.normal.n1(), pl.normal.n2())},
                       {"base_offset", rat(pl.base_offset)},
                       {"role",
                        {{"kind", to_string(g.role.kind)},
                         {"variable", g.role.variable},
                         {"constraint", g.role.constraint},
                         {"slot", g.role.slot},
                         {"owner", g.role.owner}}}});
  }
  json points = json::array();
  for (const auto& p : l.points) {
    json anchors = json::array();
    for (const auto& a : p.anchors) anchors.push_back({{"gadget", a.gadget}, {"offset", rat(a.offset)}});
    points.push_back({{"x", pair(p.x.x1, p.x.x2)},
                      {"label", {label(p.label[0]), label(p.label[1])}},
                      {"purpose", to_string(p.purpose)},
                      {"dim", p.dim},
                      {"anchors", anchors},
                      {"lower_bound", p.lower_bound ? json(*p.lower_bound) : json(nullptr)}});
  }
  json probes = json::array();
  for (const auto& p : l.probes) {
    probes.push_back({{"variable", p.variable}, {"gadget", p.gadget}, {"x", pair(p.x.x1, p.x.x2)}});
  }
  return dump({{"formula", l.formula.to_text()},
               {"config",
                {{"spacing", rat(l.config.spacing)},
                 {"vertical_margin", rat(l.config.vertical_margin)},
                 {"max_attempts", l.config.max_attempts}}},
               {"gadgets", gadgets},
               {"points", points},
               {"verticals", {rat(l.verticals[0]), rat(l.verticals[1]), rat(l.verticals[2])}},
               {"probes", probes}});
}

Layout layout_from_json(std::string_view s) {
  const json j = parse(s);
  Layout l;
  try {
    l.formula = parse_formula(text(j, "formula"));
  } catch (const SyntaxError& e) {
    throw FormatError(std::string("layout formula: ") + e.what());
  }
  const json& cfg = field(j, "config");
  l.config.spacing = rat(field(cfg, "spacing"));
  l.config.vertical_margin = rat(field(cfg, "vertical_margin"));
  if (!field(cfg, "max_attempts").is_number_integer()) throw FormatError("'max_attempts' must be an integer");
  l.config.max_attempts = field(cfg, "max_attempts").get<int>();

  for (const auto& g : field(j, "gadgets")) {
    const GadgetKind kind = from_name(text(g, "kind"), kGadgetKinds, "gadget kind");
    const json& act = pair_field(g, "active");
    if (!act[0].is_boolean() || !act[1].is_boolean()) throw FormatError("'active' must hold booleans");
    const json& n = pair_field(g, "normal");
    PlacedGadget pg{{gadget_template(kind, {act[0].get<bool>(), act[1].get<bool>()}),
                     make_direction(rat(n[0]), rat(n[1])), rat(field(g, "base_offset"))},
                    {}};
    const json& role = field(g, "role");
    pg.role.kind = from_name(text(role, "kind"), kRoles, "role");
    pg.role.variable = text(role, "variable");
    pg.role.constraint = index(role, "constraint");
    pg.role.slot = index(role, "slot");
    pg.role.owner = index(role, "owner");
    l.gadgets.push_back(std::move(pg));
  }
  auto gadget_index = [&](const json& j, const char* key) {
    const std::size_t g = index(j, key);
    if (g >= l.gadgets.size()) throw FormatError("gadget index " + std::to_string(g) + " out of range");
    return g;
  };

  for (const auto& p : field(j, "points")) {
    ConstraintPoint cp;
    const json& x = pair_field(p, "x");
    cp.x = {rat(x[0]), rat(x[1])};
    const json& lab = pair_field(p, "label");
    cp.label = {label(lab[0]), label(lab[1])};
    cp.purpose = from_name(text(p, "purpose"), kPurposes, "point purpose");
    cp.dim = index(p, "dim");
    for (const auto& a : field(p, "anchors")) cp.anchors.push_back({gadget_index(a, "gadget"), rat(field(a, "offset"))});
    if (!field(p, "lower_bound").is_null()) cp.lower_bound = gadget_index(p, "lower_bound");
    l.points.push_back(std::move(cp));
  }
  const json& v = field(j, "verticals");
  if (!v.is_array() || v.size() != 3) throw FormatError("'verticals' must have three entries");
  l.verticals = {rat(v[0]), rat(v[1]), rat(v[2])};
  for (const auto& p : field(j, "probes")) {
    const json& x = pair_field(p, "x");
    l.probes.push_back({text(p, "variable"), gadget_index(p, "gadget"), {rat(x[0]), rat(x[1])}});
  }
  return l;
}

std::string profiles_to_json(const std::vector<FittingProfile>& profiles) {
  json out = json::array();
  for (const auto& p : profiles) {
    auto list = [](const std::vector<Rational>& v) {
      json a = json::array();
      for (const auto& r : v) a.push_back(rat(r));
      return a;
    };
    out.push_back({{"breakpoints", list(p.breakpoints)},
                   {"nodes", list(p.nodes)},
                   {"slopes", {list(p.slopes[0]), list(p.slopes[1])}},
                   {"values", {list(p.values[0]), list(p.values[1])}},
                   {"determined", p.determined}});
  }
  return dump(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw FormatError("failed writing '" + path + "'");
}

}  // namespace ernn::io
