#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ernn/rational.hpp"

namespace ernn {

// coeffs . x <= rhs, or coeffs . x < rhs when strict.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool strict = false;
};

// Exact Fourier-Motzkin elimination with back-substitution. Returns some
// point satisfying every constraint, or nullopt if the system is infeasible.
// Intended for the handful of variables that appear in cell and profile
// feasibility checks; the constraint count grows quadratically per variable.
[[nodiscard]] std::optional<std::vector<Rational>> find_feasible_point(
    std::span<const LinearConstraint> constraints, std::size_t dims);

}  // namespace ernn
