#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ernn/rational.hpp"

namespace ernn {

// X + Y = Z
struct AddConstraint {
  std::string x, y, z;
  friend bool operator==(const AddConstraint&, const AddConstraint&) = default;
};

// X * Y = 1
struct InvConstraint {
  std::string x, y;
  friend bool operator==(const InvConstraint&, const InvConstraint&) = default;
};

using EtrConstraint = std::variant<AddConstraint, InvConstraint>;

// Conjunction of Add/Inv constraints over named real variables.
class EtrInvFormula {
 public:
  EtrInvFormula() = default;
  // Variables are collected in first-mention order. Throws std::invalid_argument
  // if there are no constraints.
  explicit EtrInvFormula(std::vector<EtrConstraint> constraints);

  [[nodiscard]] const std::vector<std::string>& variables() const { return variables_; }
  [[nodiscard]] const std::vector<EtrConstraint>& constraints() const { return constraints_; }
  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;

  [[nodiscard]] std::size_t addition_count() const;
  [[nodiscard]] std::size_t inversion_count() const;

  // Canonical text form, one constraint per line.
  [[nodiscard]] std::string to_text() const;

  friend bool operator==(const EtrInvFormula&, const EtrInvFormula&) = default;

 private:
  std::vector<std::string> variables_;
  std::vector<EtrConstraint> constraints_;
};

using Assignment = std::map<std::string, Rational>;

// Promise range for satisfying assignments.
inline const Rational kRangeLow{1, 2};
inline const Rational kRangeHigh{2};

// Throws SyntaxError(line, column, message).
[[nodiscard]] EtrInvFormula parse_formula(std::string_view text);

// "X = p/q" per line, '#' comments. Throws SyntaxError.
[[nodiscard]] Assignment parse_assignment(std::string_view text);
[[nodiscard]] std::string format_assignment(const EtrInvFormula& f, const Assignment& a);

struct ConstraintViolation {
  std::size_t constraint_index;
  Rational residual;  // X+Y-Z or X*Y-1
};

struct SatisfactionReport {
  bool satisfied = false;
  std::vector<ConstraintViolation> violations;
  std::vector<std::string> out_of_range;  // variables outside [1/2, 2]
};

// Throws MissingVariable if a variable of f has no value.
[[nodiscard]] SatisfactionReport check_assignment(const EtrInvFormula& f, const Assignment& a);

// Every distinct p/q in [1/2, 2] with q <= denom_bound, ascending.
[[nodiscard]] std::vector<Rational> promise_grid(long denom_bound);

// Lexicographically first (variable order, ascending values) satisfying
// assignment on the grid, or nullopt. nullopt is not a proof of
// unsatisfiability: solutions may be irrational or need larger denominators.
[[nodiscard]] std::optional<Assignment> grid_solve(const EtrInvFormula& f, long denom_bound);

}  // namespace ernn
