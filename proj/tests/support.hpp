#pragma once

#include "hbsg/group.hpp"
#include "hbsg/harness.hpp"
#include "hbsg/strings.hpp"

#include <random>
#include <vector>

namespace hbsg::testing {

inline GroupSpec window() {
  return GroupSpec::integer_window(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
}

inline ElemSet ints(std::initializer_list<std::int64_t> v) { return ElemSet::from_values(window(), v); }

inline ElemSet interval(std::int64_t start, std::int64_t n, std::int64_t step = 1) {
  std::vector<std::int64_t> v;
  for (std::int64_t i = 0; i < n; ++i) v.push_back(start + i * step);
  return ElemSet::from_values(window(), v);
}

/// A random group from the three kinds, small enough for brute force.
inline GroupSpec random_group(std::mt19937_64& rng) {
  switch (harness::uniform_below(rng, 3)) {
    case 0: return GroupSpec::cyclic(2 + static_cast<std::int64_t>(harness::uniform_below(rng, 60)));
    case 1: {
      const std::int64_t primes[] = {2, 3, 5};
      const std::int64_t p = primes[harness::uniform_below(rng, 3)];
      return GroupSpec::vector_space(p, 1 + static_cast<int>(harness::uniform_below(rng, p == 2 ? 5 : 3)));
    }
    default: return window();
  }
}

/// Up to `max_size` distinct elements; window groups draw from [-range, range).
inline ElemSet random_set(std::mt19937_64& rng, const GroupSpec& g, std::size_t min_size,
                          std::size_t max_size, std::uint64_t range = 40) {
  const std::uint64_t universe = g.order().value_or(2 * range);
  const std::size_t cap = std::min<std::uint64_t>(max_size, universe);
  const std::size_t lo = std::min(min_size, cap);
  const std::size_t n = lo + harness::uniform_below(rng, cap - lo + 1);
  std::vector<std::int64_t> raw;
  for (std::uint64_t v : harness::sample_distinct(rng, universe, n)) {
    raw.push_back(g.order() ? static_cast<std::int64_t>(v)
                            : static_cast<std::int64_t>(v) - static_cast<std::int64_t>(range));
  }
  return ElemSet::from_values(g, raw);
}

/// A random subset of A^k with each string kept with probability keep/den.
inline StringSet random_strings(std::mt19937_64& rng, const ElemSet& a, int k, std::uint64_t keep,
                                std::uint64_t den) {
  const StringSet full = StringSet::full(a, k);
  std::vector<StringCode> codes;
  for (StringCode c = 0; c < full.universe(); ++c) {
    if (harness::uniform_below(rng, den) < keep) codes.push_back(c);
  }
  return StringSet::from_codes(a, k, std::move(codes), StringSet::Form::explicit_list).normalized();
}

inline AString str(const GroupSpec& g, std::initializer_list<std::int64_t> v) {
  AString s;
  for (auto x : v) s.coords.push_back(g.element(x));
  return s;
}

}  // namespace hbsg::testing
