#include "hbsg/exact.hpp"

#include "hbsg/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace hbsg {

namespace {

BigInt parse_digits(std::string_view digits) {
  BigInt value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') {
      throw InvalidArgument("not a number: '" + std::string(digits) + "'");
    }
    value = value * 10 + (ch - '0');
  }
  return value;
}

BigInt pow10(long exponent) {
  return boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent));
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (exp_text.empty() || exp_text.size() > 6) {
      throw InvalidArgument("bad exponent in '" + std::string(text) + "'");
    }
    exponent = parse_digits(exp_text).convert_to<long>();
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<long>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  if (digits.empty()) throw InvalidArgument("empty number");
  Rational value(parse_digits(digits));
  if (exponent > 0) value *= pow10(exponent);
  if (exponent < 0) value /= pow10(-exponent);
  return negative ? Rational(-value) : value;
}

std::size_t bit_length(const BigInt& value) {
  return value == 0 ? 0 : boost::multiprecision::msb(abs(value)) + 1;
}

struct MergedRatio {
  Rational coefficient;
  std::map<BigInt, Rational> exponents;
};

MergedRatio merge_ratio(const PowerProduct& lhs, const PowerProduct& rhs) {
  MergedRatio merged{lhs.coefficient() / rhs.coefficient(), {}};
  for (const auto& term : lhs.terms()) merged.exponents[term.base] += term.exponent;
  for (const auto& term : rhs.terms()) merged.exponents[term.base] -= term.exponent;
  std::erase_if(merged.exponents, [](const auto& kv) {
    return kv.first == 1 || kv.second == 0;
  });
  return merged;
}

std::strong_ordering order_of(long double a, long double b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw InvalidArgument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite number");
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw InvalidArgument("cannot format number");
  return parse_rational(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / boost::multiprecision::gcd(a, b) * b);
}

PowerProduct::PowerProduct(Rational coefficient) : coefficient_(std::move(coefficient)) {
  if (coefficient_ < 0) throw InvalidArgument("power products must be non-negative");
}

PowerProduct& PowerProduct::times(const BigInt& base, const Rational& exponent) {
  if (base < 0) throw InvalidArgument("negative base in power product");
  if (base == 0 && exponent < 0) {
    throw InvalidArgument("zero raised to a negative exponent");
  }
  terms_.push_back({base, exponent});
  return *this;
}

PowerProduct& PowerProduct::scale(const Rational& factor) {
  if (factor < 0) throw InvalidArgument("power products must be non-negative");
  coefficient_ *= factor;
  return *this;
}

bool PowerProduct::is_zero() const {
  if (coefficient_ == 0) return true;
  for (const auto& term : terms_) {
    if (term.base == 0 && term.exponent > 0) return true;
  }
  return false;
}

long double PowerProduct::log2_value() const {
  if (is_zero()) return -std::numeric_limits<long double>::infinity();
  auto log2_big = [](const BigInt& v) -> long double {
    std::size_t bits = bit_length(v);
    if (bits <= 60) return std::log2(static_cast<long double>(v.convert_to<std::uint64_t>()));
    BigInt top = v >> (bits - 60);
    return std::log2(static_cast<long double>(top.convert_to<std::uint64_t>())) +
           static_cast<long double>(bits - 60);
  };
  long double total = log2_big(numerator(coefficient_)) - log2_big(denominator(coefficient_));
  for (const auto& term : terms_) {
    if (term.base == 0) continue;  // exponent is zero here
    total += log2_big(term.base) * term.exponent.convert_to<long double>();
  }
  return total;
}

double PowerProduct::approx() const {
  if (is_zero()) return 0.0;
  return static_cast<double>(std::exp2(log2_value()));
}

std::optional<BigInt> PowerProduct::exact_integer() const {
  if (denominator(coefficient_) != 1) return std::nullopt;
  BigInt value = numerator(coefficient_);
  for (const auto& term : terms_) {
    if (denominator(term.exponent) != 1 || term.exponent < 0) return std::nullopt;
    if (numerator(term.exponent) > 4096) return std::nullopt;
    value *= boost::multiprecision::pow(term.base,
                                        numerator(term.exponent).convert_to<unsigned>());
  }
  return value;
}

Comparison compare(const PowerProduct& lhs, const PowerProduct& rhs, std::size_t bit_budget) {
  const bool lhs_zero = lhs.is_zero();
  const bool rhs_zero = rhs.is_zero();
  if (lhs_zero || rhs_zero) {
    if (lhs_zero && rhs_zero) return {std::strong_ordering::equal, true};
    return {lhs_zero ? std::strong_ordering::less : std::strong_ordering::greater, true};
  }

  MergedRatio ratio = merge_ratio(lhs, rhs);
  BigInt common = 1;
  for (const auto& [base, exponent] : ratio.exponents) {
    common = lcm(common, denominator(exponent));
  }

  long double estimated_bits =
      static_cast<long double>(common.convert_to<long double>()) *
      static_cast<long double>(bit_length(numerator(ratio.coefficient)) +
                               bit_length(denominator(ratio.coefficient)));
  for (const auto& [base, exponent] : ratio.exponents) {
    estimated_bits += abs(exponent * common).convert_to<long double>() *
                      static_cast<long double>(bit_length(base));
  }
  if (estimated_bits > static_cast<long double>(bit_budget)) {
    return {order_of(lhs.log2_value(), rhs.log2_value()), false};
  }

  const unsigned power = common.convert_to<unsigned>();
  BigInt upper = boost::multiprecision::pow(numerator(ratio.coefficient), power);
  BigInt lower = boost::multiprecision::pow(denominator(ratio.coefficient), power);
  for (const auto& [base, exponent] : ratio.exponents) {
    Rational scaled = exponent * common;
    unsigned e = abs(numerator(scaled)).convert_to<unsigned>();
    if (scaled > 0) {
      upper *= boost::multiprecision::pow(base, e);
    } else {
      lower *= boost::multiprecision::pow(base, e);
    }
  }
  if (upper < lower) return {std::strong_ordering::less, true};
  if (upper > lower) return {std::strong_ordering::greater, true};
  return {std::strong_ordering::equal, true};
}

std::optional<BigInt> ceil_value(const PowerProduct& value) {
  if (value.is_zero()) return BigInt(0);
  long double bits = value.log2_value();
  if (bits > 61.0L) return std::nullopt;
  auto candidate = static_cast<std::uint64_t>(std::ceil(std::exp2(bits)));
  auto cmp = [&](std::uint64_t t) { return compare(PowerProduct(Rational(t)), value); };
  for (int guard = 0; guard < 64; ++guard) {
    if (candidate > 0) {
      Comparison below = cmp(candidate - 1);
      if (!below.exact) return std::nullopt;
      if (below.order >= 0) {
        --candidate;
        continue;
      }
    }
    Comparison at = cmp(candidate);
    if (!at.exact) return std::nullopt;
    if (at.order < 0) {
      ++candidate;
      continue;
    }
    return BigInt(candidate);
  }
  return std::nullopt;
}

std::optional<BigInt> floor_value(const PowerProduct& value) {
  if (value.is_zero()) return BigInt(0);
  long double bits = value.log2_value();
  if (bits > 61.0L) return std::nullopt;
  auto candidate = static_cast<std::uint64_t>(std::floor(std::exp2(bits)));
  auto cmp = [&](std::uint64_t t) { return compare(PowerProduct(Rational(t)), value); };
  for (int guard = 0; guard < 64; ++guard) {
    Comparison above = cmp(candidate + 1);
    if (!above.exact) return std::nullopt;
    if (above.order <= 0) {
      ++candidate;
      continue;
    }
    Comparison at = cmp(candidate);
    if (!at.exact) return std::nullopt;
    if (at.order > 0 && candidate > 0) {
      --candidate;
      continue;
    }
    return BigInt(candidate);
  }
  return std::nullopt;
}

}  // namespace hbsg
