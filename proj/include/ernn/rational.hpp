#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace ernn {

// Arbitrary-precision exact rational. Always in lowest terms with a positive
// denominator; the GMP mpq operators keep results canonical.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}  // NOLINT
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpq_class& value);

  // Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed input
  // or a zero denominator.
  static Rational parse(std::string_view text);

  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }

  // Square root when the value is the square of a rational.
  [[nodiscard]] std::optional<Rational> exact_sqrt() const;

  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] std::string to_string() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_{0};
};

[[nodiscard]] Rational abs(const Rational& r);
[[nodiscard]] Rational max(const Rational& a, const Rational& b);
[[nodiscard]] Rational min(const Rational& a, const Rational& b);
[[nodiscard]] inline Rational relu(const Rational& r) { return r.sign() > 0 ? r : Rational(0); }

// Largest integer <= r and smallest integer >= r.
[[nodiscard]] Rational floor(const Rational& r);
[[nodiscard]] Rational ceil(const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const;
};

}  // namespace ernn
