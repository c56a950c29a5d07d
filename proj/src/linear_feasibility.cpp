#include "ernn/linear_feasibility.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <string>

namespace ernn {

namespace {

using System = std::vector<LinearConstraint>;

// Scale so the first nonzero coefficient has magnitude one; keeps duplicate
// detection meaningful and numbers small.
LinearConstraint normalized(LinearConstraint c) {
  for (const auto& v : c.coeffs) {
    if (!v.is_zero()) {
      const Rational scale = abs(v);
      for (auto& x : c.coeffs) x /= scale;
      c.rhs /= scale;
      break;
    }
  }
  return c;
}

std::string key_of(const LinearConstraint& c) {
  std::string key = c.strict ? "<" : "<=";
  for (const auto& v : c.coeffs) key += v.to_string() + ",";
  return key + "|" + c.rhs.to_string();
}

bool trivially_satisfied(const LinearConstraint& c) {
  return c.strict ? Rational(0) < c.rhs : Rational(0) <= c.rhs;
}

bool all_zero(const LinearConstraint& c) {
  return std::all_of(c.coeffs.begin(), c.coeffs.end(), [](const Rational& v) { return v.is_zero(); });
}

// Eliminates variable k; returns nullopt if a constant contradiction shows up.
std::optional<System> eliminate(const System& in, std::size_t k) {
  System pos, neg, out;
  std::set<std::string> seen;
  auto push = [&](LinearConstraint c) -> bool {
    if (all_zero(c)) return trivially_satisfied(c);
    c = normalized(std::move(c));
    if (seen.insert(key_of(c)).second) out.push_back(std::move(c));
    return true;
  };
  for (const auto& c : in) {
    const int s = c.coeffs[k].sign();
    if (s > 0) pos.push_back(c);
    else if (s < 0) neg.push_back(c);
    else if (!push(c)) return std::nullopt;
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      const Rational wp = -n.coeffs[k];
      const Rational wn = p.coeffs[k];
      LinearConstraint combined;
      combined.coeffs.resize(p.coeffs.size());
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        combined.coeffs[i] = wp * p.coeffs[i] + wn * n.coeffs[i];
      }
      combined.coeffs[k] = Rational(0);
      combined.rhs = wp * p.rhs + wn * n.rhs;
      combined.strict = p.strict || n.strict;
      if (!push(std::move(combined))) return std::nullopt;
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<Rational>> find_feasible_point(std::span<const LinearConstraint> constraints,
                                                         std::size_t dims) {
  for (const auto& c : constraints) {
    if (c.coeffs.size() != dims) throw std::invalid_argument("constraint dimension mismatch");
  }
  // levels[k] holds the system over variables 0..k (later ones eliminated).
  std::vector<System> levels(dims + 1);
  levels[dims] = System(constraints.begin(), constraints.end());
  for (std::size_t k = dims; k-- > 0;) {
    auto next = eliminate(levels[k + 1], k);
    if (!next) return std::nullopt;
    levels[k] = std::move(*next);
  }
  for (const auto& c : levels[0]) {
    if (!trivially_satisfied(c)) return std::nullopt;
  }

  std::vector<Rational> x(dims, Rational(0));
  for (std::size_t k = 0; k < dims; ++k) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& c : levels[k + 1]) {
      const Rational& a = c.coeffs[k];
      if (a.is_zero()) continue;
      Rational rest = c.rhs;
      for (std::size_t i = 0; i < k; ++i) rest -= c.coeffs[i] * x[i];
      const Rational bound = rest / a;
      if (a.sign() > 0) {
        if (!hi || bound < *hi || (bound == *hi && c.strict)) { hi = bound; hi_strict = c.strict; }
      } else {
        if (!lo || bound > *lo || (bound == *lo && c.strict)) { lo = bound; lo_strict = c.strict; }
      }
    }
    if (lo && hi) {
      if (*lo < *hi) x[k] = (*lo + *hi) / Rational(2);
      else if (*lo == *hi && !lo_strict && !hi_strict) x[k] = *lo;
      else return std::nullopt;  // unreachable for a consistent elimination
    } else if (lo) {
      x[k] = lo_strict ? *lo + Rational(1) : *lo;
    } else if (hi) {
      x[k] = hi_strict ? *hi - Rational(1) : *hi;
    }
  }
  return x;
}

}  // namespace ernn
