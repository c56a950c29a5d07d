#include "ernn/reducer.hpp"

#include "ernn/errors.hpp"
#include "ernn/parallel.hpp"

namespace ernn {

ReductionBundle compile(const EtrInvFormula& f, const LayoutConfig& cfg) { return bundle_from_layout(plan(f, cfg)); }

ReductionBundle bundle_from_layout(Layout layout) {
  ReductionBundle b;
  b.formula = layout.formula;
  auto& c = b.counts;
  c.variable_gadgets = layout.count(PlacementRole::Kind::Canonical) + layout.count(PlacementRole::Kind::AdditionCopy);
  c.inversion_gadgets = layout.count(PlacementRole::Kind::InversionGadget);
  c.lower_bound_gadgets = layout.count(PlacementRole::Kind::LowerBound);
  c.neurons = 4 * c.variable_gadgets + 5 * c.inversion_gadgets + 3 * c.lower_bound_gadgets;
  b.instance.hidden_count = c.neurons;
  b.instance.gamma = 0;
  b.instance.points = realize(layout);
  c.points = b.instance.points.size();
  b.layout = std::move(layout);
  return b;
}

std::set<Value2> label_set(const TrainInstance& inst) {
  std::set<Value2> out;
  for (const auto& p : inst.points) out.insert(p.y);
  return out;
}

namespace {

GadgetState slope_state(const PlacedGadget& g, const EtrInvFormula& f, const Assignment& a) {
  switch (g.role.kind) {
    case PlacementRole::Kind::Canonical:
    case PlacementRole::Kind::AdditionCopy:
      return GadgetState::variable(a.at(g.role.variable) + 1);
    case PlacementRole::Kind::InversionGadget: {
      const auto& inv = std::get<InvConstraint>(f.constraints().at(g.role.constraint));
      return {a.at(inv.x) + 1, a.at(inv.y) + 1, 0};
    }
    case PlacementRole::Kind::LowerBound:
      break;
  }
  throw InvalidState("lower bound gadgets carry no slope");
}

}  // namespace

Network witness(const ReductionBundle& bundle, const Assignment& a) {
  const auto report = check_assignment(bundle.formula, a);
  if (!report.satisfied) {
    std::string why;
    for (const auto& v : report.violations) {
      why += " constraint " + std::to_string(v.constraint_index) + " off by " + v.residual.to_string() + ";";
    }
    for (const auto& v : report.out_of_range) why += " " + v + " outside [1/2, 2];";
    throw UnsatisfiedAssignment("assignment does not satisfy the formula:" + why);
  }

  const auto& gs = bundle.layout.gadgets;
  std::vector<std::vector<HiddenNeuron>> parts(gs.size());
  parallel_for(gs.size(), [&](std::size_t g) {
    if (gs[g].role.kind != PlacementRole::Kind::LowerBound) {
      parts[g] = witness_neurons(gs[g].placement, slope_state(gs[g], bundle.formula, a));
    }
  });
  Network slopes_only;
  for (const auto& p : parts) slopes_only.neurons.insert(slopes_only.neurons.end(), p.begin(), p.end());

  std::vector<std::string> errors(gs.size());
  parallel_for(gs.size(), [&](std::size_t g) {
    if (gs[g].role.kind != PlacementRole::Kind::LowerBound) return;
    const auto& point = bundle.layout.points.at(gs[g].role.owner);
    const Value2 others = evaluate(slopes_only, point.x);
    std::optional<Rational> depth;
    for (std::size_t d = 0; d < 2; ++d) {
      if (point.label[d].is_exact()) continue;
      const Rational need = others[d] - point.label[d].value + 2;
      if (depth && *depth != need) {
        errors[g] = "weak point " + std::to_string(gs[g].role.owner) + " needs different depths per dimension";
        return;
      }
      depth = need;
    }
    if (!depth || *depth < 2) {
      errors[g] = "weak point " + std::to_string(gs[g].role.owner) + " needs depth " +
                  (depth ? depth->to_string() : std::string("?")) + " < 2";
      return;
    }
    parts[g] = witness_neurons(gs[g].placement, GadgetState::lower_bound(*depth));
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw DepthUnderflow(e);
  }

  Network net;
  for (const auto& p : parts) net.neurons.insert(net.neurons.end(), p.begin(), p.end());
  return net;
}

Assignment extract(const ReductionBundle& bundle, const Network& net) {
  const auto fit = exact_fit(net, bundle.instance);
  if (!fit.fits) {
    throw NotFitting("network misses " + std::to_string(fit.violations.size()) + " of " +
                     std::to_string(bundle.instance.points.size()) + " points");
  }
  Assignment out;
  for (const auto& probe : bundle.layout.probes) {
    const Value2 y = evaluate(net, probe.x);
    if (y.y1 != y.y2) {
      throw DimensionMismatch("outputs disagree at the probe of " + probe.variable + ": " + y.y1.to_string() +
                              " vs " + y.y2.to_string());
    }
    out[probe.variable] = y.y1 - 3 - 1;
  }
  return out;
}

VerifyReport verify(const Network& net, const TrainInstance& inst, const Rational& gamma) {
  auto fit = exact_fit(net, inst);
  VerifyReport r;
  r.loss = fit.squared_error;
  r.violations = std::move(fit.violations);
  r.accepted = r.loss <= gamma;
  return r;
}

}  // namespace ernn
