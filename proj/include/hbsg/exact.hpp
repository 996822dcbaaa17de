#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hbsg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-7/2", "0.05", "1.5e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// The shortest decimal that round-trips `value`, read back exactly, so
/// 0.05 becomes 1/20 rather than the binary expansion of the double.
Rational rational_from_double(double value);

std::string to_string(const Rational& value);
double to_double(const Rational& value);
BigInt lcm(const BigInt& a, const BigInt& b);

struct PowerTerm {
  BigInt base;
  Rational exponent;
};

/// A non-negative quantity of the form coefficient * prod(base_i ^ e_i) with
/// integer bases and rational exponents. Thresholds such as |A|^(k/2 - 2d)
/// are kept in this form so they can be compared without floating point.
class PowerProduct {
 public:
  PowerProduct() = default;
  explicit PowerProduct(Rational coefficient);

  PowerProduct& times(const BigInt& base, const Rational& exponent = Rational(1));
  PowerProduct& scale(const Rational& factor);

  const Rational& coefficient() const { return coefficient_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }

  bool is_zero() const;
  /// log2 of the value; -infinity for zero.
  long double log2_value() const;
  double approx() const;
  /// Exact value when every exponent is a non-negative integer and the
  /// coefficient is integral.
  std::optional<BigInt> exact_integer() const;

 private:
  Rational coefficient_{1};
  std::vector<PowerTerm> terms_;
};

struct Comparison {
  std::strong_ordering order = std::strong_ordering::equal;
  /// False when the operands were too large for exact evaluation and the
  /// result came from log-scale floating point.
  bool exact = true;
};

/// Bit budget for exact comparisons; beyond it compare() falls back to logs.
inline constexpr std::size_t kExactBitBudget = std::size_t{1} << 18;

Comparison compare(const PowerProduct& lhs, const PowerProduct& rhs,
                   std::size_t bit_budget = kExactBitBudget);

/// Smallest integer >= value / largest integer <= value. Empty when the value
/// does not fit comfortably in 62 bits or cannot be decided exactly.
std::optional<BigInt> ceil_value(const PowerProduct& value);
std::optional<BigInt> floor_value(const PowerProduct& value);

}  // namespace hbsg
