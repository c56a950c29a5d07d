// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ernn/cli.hpp"
#include "ernn/errors.hpp"
#include "ernn/gadgets.hpp"
#include "ernn/io.hpp"
#include "ernn/reducer.hpp"

using namespace ernn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

Assignment assignment(std::initializer_list<std::pair<const char*, Rational>> vs) {
  Assignment a;
  for (const auto& [k, v] : vs) a[k] = v;
  return a;
}

const char* kRoundTripFormula = "add X Y Z\ninv X W\n";

Assignment round_trip_assignment() {
  return assignment({{"X", 1}, {"Y", Rational(1, 2)}, {"Z", Rational(3, 2)}, {"W", 1}});
}

void round_trip(Outcome& o) {
  const auto t0 = Clock::now();
  const auto bundle = compile(parse_formula(kRoundTripFormula));
  const auto net = witness(bundle, round_trip_assignment());
  const auto report = verify(net, bundle.instance, 0);
  o.require(report.accepted && report.loss.is_zero(), "loss is exactly 0");
  o.require(extract(bundle, net) == round_trip_assignment(), "extract returns the assignment");
  const double s = seconds_since(t0);
  o.require(s < 5, "runtime under 5 s");
  o.note << "m=" << bundle.counts.neurons << " n=" << bundle.counts.points << " loss=" << report.loss.to_string()
         << " time=" << s << "s";
}

void count_identities(Outcome& o) {
  const char* corpus[] = {"inv X X\n",
                          "inv X Y\n",
                          "add X Y Z\ninv X W\n",
                          "add Y Y X\nadd X Y Z\ninv Y W\n",
                          "inv X Y\nadd X X V\ninv V U\n",
                          "add X X Y\ninv X Y\n",
                          "add A B C\nadd C C D\ninv A D\ninv B B\n"};
  std::size_t max_labels = 0, worst_ratio_num = 0, worst_ratio_den = 1;
  for (const char* text : corpus) {
    const auto f = parse_formula(text);
    const auto b = compile(f);
    const std::size_t V = f.variables().size() + 3 * f.addition_count();
    const std::size_t I = f.inversion_count();
    const std::size_t L = V + 2 * I;
    const std::size_t m = 4 * V + 5 * I + 3 * L;
    o.require(b.counts.variable_gadgets == V && b.counts.inversion_gadgets == I && b.counts.lower_bound_gadgets == L,
              "gadget counts");
    o.require(b.counts.neurons == m && b.instance.hidden_count == m, "m = 4V+5I+3L");
    o.require(b.instance.points.size() <= 10 * m, "n <= 10m");
    o.require(b.instance.gamma.is_zero(), "gamma = 0");
    const std::size_t labels = label_set(b.instance).size();
    o.require(labels <= 13, "at most 13 labels");
    max_labels = std::max(max_labels, labels);
    if (b.instance.points.size() * worst_ratio_den > worst_ratio_num * m) {
      worst_ratio_num = b.instance.points.size();
      worst_ratio_den = m;
    }
  }
  o.note << std::size(corpus) << " formulas, max labels " << max_labels << ", max n/m " << worst_ratio_num << "/"
         << worst_ratio_den;
}

void variable_oracle(Outcome& o) {
  const auto t0 = Clock::now();
  const auto cs = cross_section(gadget_template(GadgetKind::Variable));
  o.require(fit_cpwl_1d_oracle(cs, 3, 6).empty(), "k=3 has no fit");
  const auto profiles = fit_cpwl_1d_oracle(cs, 4, 6);
  o.require(!profiles.empty(), "k=4 has fits");
  for (const auto& p : profiles) {
    o.require(p.breakpoints.size() == 4 && p.breakpoints[2] == 8 && p.breakpoints[3] == 14, "breakpoints 8 and 14");
    for (std::size_t d = 0; d < 2; ++d) {
      o.require(p.evaluate(d, 8) == 6, "plateau value 6");
      o.require(p.slopes[d][1] >= Rational(3, 2) && p.slopes[d][1] <= 3, "first slope in [3/2, 3]");
    }
  }
  const double s = seconds_since(t0);
  o.require(s < 60, "runtime under 60 s");
  o.note << profiles.size() << " profiles, time=" << s << "s";
}

// Slope of the first piece with a nonzero slope in a dimension.
Rational first_rise(const FittingProfile& p, std::size_t dim) {
  for (const auto& s : p.slopes[dim]) {
    if (!s.is_zero()) return s;
  }
  return 0;
}

void inversion_oracle(Outcome& o) {
  const auto t0 = Clock::now();
  const auto profiles = fit_cpwl_1d_oracle(cross_section(gadget_template(GadgetKind::Inversion)), 5, 4);
  o.require(!profiles.empty(), "k=5 has fits");
  for (const auto& p : profiles) {
    const Rational sx = first_rise(p, 0), sy = first_rise(p, 1);
    o.require(sx * sy == sx + sy, "sX*sY = sX+sY");
    std::size_t only[2] = {0, 0};
    for (std::size_t b = 0; b < p.breakpoints.size(); ++b) {
      const bool c0 = !p.slope_change(0, b).is_zero(), c1 = !p.slope_change(1, b).is_zero();
      if (c0 && !c1) ++only[0];
      if (c1 && !c0) ++only[1];
      o.require(c0 || c1, "no breakpoint erased in both dimensions");
    }
    o.require(only[0] >= 1 && only[1] >= 1, "each dimension has an exclusive breakpoint erased in the other");
  }
  o.note << profiles.size() << " profiles, time=" << seconds_since(t0) << "s";
}

void lower_bound_gadget(Outcome& o) {
  const auto tmpl = gadget_template(GadgetKind::LowerBound);
  const Rational mid = lower_bound_center();
  for (const Rational d : {Rational(2), Rational(3), Rational(12)}) {
    const auto st = GadgetState::lower_bound(d);
    o.require(profile(tmpl, st, mid) == Value2{-d, -d}, "profile at the midpoint is -d");
    const Rational u = d / (d - 1);
    const auto ridges = witness_ridges(tmpl, st);
    o.require(ridges.size() == 3 && ridges[0].at == mid - u && ridges[1].at == mid && ridges[2].at == mid + u,
              "ridges at 4-u, 4, 4+u");
    for (int i = 0; i <= 40; ++i) {
      const Rational t = Rational(i, 10);
      o.require(profile(tmpl, st, mid - t) == profile(tmpl, st, mid + t), "symmetric");
      const bool zero = profile(tmpl, st, mid + t).y1.is_zero();
      o.require(zero == (t >= u), "support radius d/(d-1)");
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(200, 5000);
  for (int i = 0; i < 200; ++i) {
    const Rational d(num(rng), 100);
    const Value2 v = profile(tmpl, GadgetState::lower_bound(d), mid);
    o.require(v.y1 <= -2 && v.y2 <= -2, "midpoint contribution <= -2");
  }
  bool rejected = false;
  try {
    (void)profile(tmpl, GadgetState::lower_bound(Rational(3, 2)), mid);
  } catch (const InvalidState&) {
    rejected = true;
  }
  o.require(rejected, "depth below 2 rejected");
  o.note << "depths 2, 3, 12 and 200 random depths";
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-60, 60), den(1, 12);
  return {num(rng), den(rng)};
}

CpwlSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 7);
  const Point2 zero{random_rational(rng), random_rational(rng)};
  const int n = count(rng);
  std::vector<Vec2> normals;
  while (static_cast<int>(normals.size()) < n) {
    Vec2 a{random_rational(rng), random_rational(rng)};
    if (a.is_zero()) continue;
    // The last two must be independent to absorb the balance.
    if (static_cast<int>(normals.size()) == n - 1 && cross(a, normals.back()).is_zero()) continue;
    normals.push_back(a);
  }
  std::vector<Rational> mu1(n), mu2(n);
  Vec2 rest1{0, 0}, rest2{0, 0};
  for (int i = 0; i + 2 < n; ++i) {
    mu1[i] = random_rational(rng);
    mu2[i] = random_rational(rng);
    rest1 += mu1[i] * normals[i];
    rest2 += mu2[i] * normals[i];
  }
  // mu_p * a_p + mu_q * a_q = -rest, by Cramer's rule.
  const Vec2& ap = normals[n - 2];
  const Vec2& aq = normals[n - 1];
  const Rational det = cross(ap, aq);
  auto solve = [&](const Vec2& rest, Rational& mp, Rational& mq) {
    const Vec2 r{-rest.v1, -rest.v2};
    mp = cross(r, aq) / det;
    mq = cross(ap, r) / det;
  };
  solve(rest1, mu1[n - 2], mu1[n - 1]);
  solve(rest2, mu2[n - 2], mu2[n - 1]);

  CpwlSpec spec;
  std::uniform_int_distribution<long> slack(1, 40);
  for (int i = 0; i < n; ++i) {
    const Vec2& a = normals[i];
    // The zero point lies strictly on the negative side.
    const Rational b = -(a.v1 * zero.x1 + a.v2 * zero.x2) - Rational(slack(rng), 7);
    spec.breaklines.push_back({{a, b}, mu1[i] * a, mu2[i] * a});
  }
  return spec;
}

void ridge_equivalence(Outcome& o) {
  std::mt19937_64 rng(31337);
  std::size_t checks = 0;
  for (int s = 0; s < 100; ++s) {
    const CpwlSpec spec = random_spec(rng);
    o.require(gradient_changes_balanced(spec), "generated spec is balanced");
    const Network net = cpwl_to_network(spec);
    for (int i = 0; i < 100; ++i, ++checks) {
      const Point2 p{random_rational(rng), random_rational(rng)};
      o.require(evaluate(net, p) == evaluate(spec, p), "network equals the spec");
    }
  }
  o.note << checks << " exact point comparisons";
}

void soundness(Outcome& o) {
  const auto bundle = compile(parse_formula(kRoundTripFormula));
  const auto net = witness(bundle, round_trip_assignment());
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, net.neurons.size() - 1);
  std::size_t min_violations = bundle.instance.points.size();
  for (int t = 0; t < 10; ++t) {
    Network moved = net;
    auto& n = moved.neurons[pick(rng)];
    const Rational f(101, 100);
    n.a1 *= f;
    n.a2 *= f;
    n.b *= f;
    const auto r = verify(moved, bundle.instance, 0);
    o.require(!r.accepted && !r.violations.empty(), "perturbed network rejected");
    min_violations = std::min(min_violations, r.violations.size());
  }
  o.note << "10 neurons, min violated points " << min_violations;
}

void lipschitz(Outcome& o) {
  const auto bundle = compile(parse_formula(kRoundTripFormula));
  const auto net = witness(bundle, round_trip_assignment());
  const Rational bound = max_gradient_norm_bound(net);
  o.require(bound <= 625, "squared gradient norm <= 625");
  o.note << "max squared gradient norm " << bound.to_string() << " (norm ~" << std::sqrt(bound.to_double()) << ")";
}

void grid_solver(Outcome& o) {
  const auto t0 = Clock::now();
  const auto x = grid_solve(parse_formula("inv X X"), 8);
  o.require(x && x->at("X") == 1, "Inv(X,X) gives X=1");
  const auto none = grid_solve(parse_formula("add X X Y\ninv X Y"), 100);
  o.require(!none, "irrational instance not found at denominator 100");
  const double s = seconds_since(t0);
  o.require(s < 30, "runtime under 30 s");
  o.note << "time=" << s << "s";
}

void determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ernn_acceptance";
  fs::create_directories(dir);
  const std::string formula = (dir / "f.etr").string();
  io::write_file(formula, kRoundTripFormula);
  std::string inst[2], lay[2];
  for (int run = 0; run < 2; ++run) {
    const std::string i = (dir / ("inst" + std::to_string(run) + ".json")).string();
    const std::string l = (dir / ("layout" + std::to_string(run) + ".json")).string();
    const auto r = cli::run({"ernn", "compile", formula, "-o", i, "--layout", l});
    o.require(r.exit_code == 0, "compile succeeds");
    inst[run] = io::read_file(i);
    lay[run] = io::read_file(l);
  }
  o.require(inst[0] == inst[1], "instance files identical");
  o.require(lay[0] == lay[1], "layout files identical");
  o.note << inst[0].size() << " + " << lay[0].size() << " bytes";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"round trip on Add(X,Y,Z), Inv(X,W)", round_trip},
      {"count identities on the corpus", count_identities},
      {"variable gadget oracle", variable_oracle},
      {"inversion gadget oracle", inversion_oracle},
      {"lower bound gadget", lower_bound_gadget},
      {"ridge network equals its CPWL spec", ridge_equivalence},
      {"soundness under neuron scaling", soundness},
      {"witness gradient bound", lipschitz},
      {"grid solver", grid_solver},
      {"compile determinism", determinism},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << index++ << ": " << (o.pass ? "PASS" : "FAIL") << " " << name << " (" << o.note.str()
              << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
