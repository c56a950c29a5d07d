#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "ernn/etr_inv.hpp"
#include "ernn/layout.hpp"
#include "ernn/network.hpp"

namespace ernn {

struct ReductionCounts {
  std::size_t variable_gadgets = 0;   // V
  std::size_t inversion_gadgets = 0;  // I
  std::size_t lower_bound_gadgets = 0;  // L
  std::size_t neurons = 0;  // m = 4V + 5I + 3L
  std::size_t points = 0;   // n
};

struct ReductionBundle {
  EtrInvFormula formula;
  TrainInstance instance;
  Layout layout;
  ReductionCounts counts;
};

// Plans a validated layout and realizes it. Propagates PlacementFailure.
[[nodiscard]] ReductionBundle compile(const EtrInvFormula& f, const LayoutConfig& cfg = {});
// Same as compile, for a layout that was planned earlier (e.g. read back from
// a sidecar file).
[[nodiscard]] ReductionBundle bundle_from_layout(Layout layout);

[[nodiscard]] std::set<Value2> label_set(const TrainInstance& inst);

// Canonical witness: slope value + 1 for every variable and copy gadget, both
// slopes for inversion gadgets, and lower bound depths chosen so that every
// converted weak point is hit exactly. Throws UnsatisfiedAssignment or
// DepthUnderflow.
[[nodiscard]] Network witness(const ReductionBundle& bundle, const Assignment& a);

// Reads each variable off its probe: X = f(probe) - 3 - 1. Throws NotFitting
// unless the network fits the instance exactly, DimensionMismatch if the two
// outputs disagree at a probe.
[[nodiscard]] Assignment extract(const ReductionBundle& bundle, const Network& net);

struct VerifyReport {
  bool accepted = false;
  Rational loss{0};  // total squared error
  std::vector<PointViolation> violations;
};

[[nodiscard]] VerifyReport verify(const Network& net, const TrainInstance& inst, const Rational& gamma);

}  // namespace ernn
