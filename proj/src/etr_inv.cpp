#include "ernn/etr_inv.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ernn/errors.hpp"

namespace ernn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Single-line scanner shared by the formula and assignment readers.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
  }

  // True at end of line or at a comment.
  bool at_end() {
    skip_space();
    return pos_ >= line_.size() || line_[pos_] == '#';
  }

  std::size_t column() const { return pos_ + 1; }

  std::string identifier(const char* what) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] == '#') fail(std::string("expected ") + what + ", found end of line");
    if (!ident_start(line_[pos_])) fail(std::string("expected ") + what + ", found '" + line_[pos_] + "'");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string rational_token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) && line_[pos_] != '#') ++pos_;
    if (start == pos_) fail("expected a rational value");
    return std::string(line_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(line_no_, column(), message); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
    throw SyntaxError(line_no_, column, message);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 1;
  while (true) {
    const auto nl = text.find('\n');
    fn(text.substr(0, nl), line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
    ++line_no;
  }
}

EtrConstraint parse_constraint(LineScanner& scan) {
  const std::size_t keyword_column = [&] { scan.skip_space(); return scan.column(); }();
  const std::string keyword = scan.identifier("'add' or 'inv'");
  if (keyword == "add") {
    AddConstraint c;
    c.x = scan.identifier("variable (add takes 3)");
    c.y = scan.identifier("variable (add takes 3)");
    c.z = scan.identifier("variable (add takes 3)");
    return c;
  }
  if (keyword == "inv") {
    InvConstraint c;
    c.x = scan.identifier("variable (inv takes 2)");
    c.y = scan.identifier("variable (inv takes 2)");
    return c;
  }
  scan.fail_at(keyword_column, "unknown constraint '" + keyword + "', expected 'add' or 'inv'");
}

}  // namespace

EtrInvFormula::EtrInvFormula(std::vector<EtrConstraint> constraints) : constraints_(std::move(constraints)) {
  if (constraints_.empty()) throw std::invalid_argument("formula has no constraints");
  auto mention = [this](const std::string& v) {
    if (std::find(variables_.begin(), variables_.end(), v) == variables_.end()) variables_.push_back(v);
  };
  for (const auto& c : constraints_) {
    std::visit(overloaded{[&](const AddConstraint& a) { mention(a.x); mention(a.y); mention(a.z); },
                          [&](const InvConstraint& i) { mention(i.x); mention(i.y); }},
               c);
  }
}

std::optional<std::size_t> EtrInvFormula::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t EtrInvFormula::addition_count() const {
  return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(), [](const auto& c) {
    return std::holds_alternative<AddConstraint>(c);
  }));
}

std::size_t EtrInvFormula::inversion_count() const { return constraints_.size() - addition_count(); }

std::string EtrInvFormula::to_text() const {
  std::string out;
  for (const auto& c : constraints_) {
    std::visit(overloaded{[&](const AddConstraint& a) { out += "add " + a.x + " " + a.y + " " + a.z + "\n"; },
                          [&](const InvConstraint& i) { out += "inv " + i.x + " " + i.y + "\n"; }},
               c);
  }
  return out;
}

EtrInvFormula parse_formula(std::string_view text) {
  std::vector<EtrConstraint> constraints;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    LineScanner scan(line, line_no);
    if (scan.at_end()) return;
    constraints.push_back(parse_constraint(scan));
    if (!scan.at_end()) scan.fail("unexpected trailing input (wrong arity?)");
  });
  if (constraints.empty()) throw SyntaxError(1, 1, "formula contains no constraints");
  return EtrInvFormula(std::move(constraints));
}

Assignment parse_assignment(std::string_view text) {
  Assignment a;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    LineScanner scan(line, line_no);
    if (scan.at_end()) return;
    const std::string name = scan.identifier("variable name");
    scan.expect('=');
    const std::size_t value_column = [&] { scan.skip_space(); return scan.column(); }();
    const std::string token = scan.rational_token();
    Rational value;
    try {
      value = Rational::parse(token);
    } catch (const std::invalid_argument& e) {
      scan.fail_at(value_column, e.what());
    }
    if (!scan.at_end()) scan.fail("unexpected trailing input");
    if (!a.emplace(name, value).second) scan.fail_at(1, "duplicate variable '" + name + "'");
  });
  return a;
}

std::string format_assignment(const EtrInvFormula& f, const Assignment& a) {
  std::string out;
  for (const auto& v : f.variables()) {
    const auto it = a.find(v);
    if (it != a.end()) out += v + " = " + it->second.to_string() + "\n";
  }
  return out;
}

SatisfactionReport check_assignment(const EtrInvFormula& f, const Assignment& a) {
  auto value = [&](const std::string& v) -> const Rational& {
    const auto it = a.find(v);
    if (it == a.end()) throw MissingVariable("no value for variable '" + v + "'");
    return it->second;
  };
  SatisfactionReport report;
  for (const auto& v : f.variables()) {
    const Rational& x = value(v);
    if (x < kRangeLow || x > kRangeHigh) report.out_of_range.push_back(v);
  }
  for (std::size_t i = 0; i < f.constraints().size(); ++i) {
    const Rational residual = std::visit(
        overloaded{[&](const AddConstraint& c) { return value(c.x) + value(c.y) - value(c.z); },
                   [&](const InvConstraint& c) { return value(c.x) * value(c.y) - Rational(1); }},
        f.constraints()[i]);
    if (!residual.is_zero()) report.violations.push_back({i, residual});
  }
  report.satisfied = report.violations.empty() && report.out_of_range.empty();
  return report;
}

std::vector<Rational> promise_grid(long denom_bound) {
  if (denom_bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
  std::set<Rational> values;
  for (long q = 1; q <= denom_bound; ++q) {
    // p/q in [1/2, 2]  <=>  ceil(q/2) <= p <= 2q
    for (long p = (q + 1) / 2; p <= 2 * q; ++p) values.insert(Rational(p, q));
  }
  return {values.begin(), values.end()};
}

namespace {

class GridSearch {
 public:
  GridSearch(const EtrInvFormula& f, long bound) : f_(f), bound_(bound), grid_(promise_grid(bound)) {
    const auto& vars = f.variables();
    values_.resize(vars.size());
    for (const auto& c : f.constraints()) {
      std::vector<std::size_t> idx;
      std::visit(overloaded{[&](const AddConstraint& a) {
                              idx = {*f.index_of(a.x), *f.index_of(a.y), *f.index_of(a.z)};
                            },
                            [&](const InvConstraint& i) { idx = {*f.index_of(i.x), *f.index_of(i.y)}; }},
                 c);
      // A constraint becomes decidable once its highest-index variable is set.
      last_var_.push_back(*std::max_element(idx.begin(), idx.end()));
      indices_.push_back(std::move(idx));
    }
  }

  std::optional<Assignment> run() {
    if (!search(0)) return std::nullopt;
    Assignment a;
    for (std::size_t i = 0; i < values_.size(); ++i) a[f_.variables()[i]] = values_[i];
    return a;
  }

 private:
  bool on_grid(const Rational& v) const {
    return v >= kRangeLow && v <= kRangeHigh && v.denominator() <= bound_;
  }

  // Value that constraint `ci` forces on variable `var` given all lower
  // variables; nullopt if it leaves `var` free. Sets `contradiction` when the
  // constraint cannot hold for any value.
  std::optional<Rational> forced_value(std::size_t ci, std::size_t var, bool& contradiction) const {
    const auto& idx = indices_[ci];
    if (std::holds_alternative<AddConstraint>(f_.constraints()[ci])) {
      Rational coeff(0), constant(0);
      const Rational signs[3] = {Rational(1), Rational(1), Rational(-1)};
      for (std::size_t k = 0; k < 3; ++k) {
        if (idx[k] == var) coeff += signs[k];
        else constant += signs[k] * values_[idx[k]];
      }
      if (coeff.is_zero()) {
        if (!constant.is_zero()) contradiction = true;
        return std::nullopt;
      }
      return -constant / coeff;
    }
    if (idx[0] == var && idx[1] == var) return Rational(1);  // X*X = 1 with X > 0
    const std::size_t other = idx[0] == var ? idx[1] : idx[0];
    return Rational(1) / values_[other];
  }

  bool search(std::size_t var) {
    if (var == values_.size()) return true;
    std::optional<Rational> forced;
    for (std::size_t ci = 0; ci < indices_.size(); ++ci) {
      if (last_var_[ci] != var) continue;
      bool contradiction = false;
      auto v = forced_value(ci, var, contradiction);
      if (contradiction) return false;
      if (!v) continue;
      if (forced && *forced != *v) return false;
      forced = std::move(v);
    }
    if (forced) {
      if (!on_grid(*forced)) return false;
      values_[var] = *forced;
      return search(var + 1);
    }
    for (const auto& candidate : grid_) {
      values_[var] = candidate;
      if (search(var + 1)) return true;
    }
    return false;
  }

  const EtrInvFormula& f_;
  long bound_;
  std::vector<Rational> grid_;
  std::vector<Rational> values_;
  std::vector<std::vector<std::size_t>> indices_;
  std::vector<std::size_t> last_var_;
};

}  // namespace

std::optional<Assignment> grid_solve(const EtrInvFormula& f, long denom_bound) {
  if (denom_bound < 1) throw std::invalid_argument("denominator bound must be >= 1");
  return GridSearch(f, denom_bound).run();
}

}  // namespace ernn
