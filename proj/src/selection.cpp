#include "hbsg/selection.hpp"

#include "hbsg/errors.hpp"

#include <algorithm>
#include <map>

namespace hbsg {

FamilyOfSubsets::FamilyOfSubsets(std::size_t universe_size,
                                 std::vector<std::vector<std::size_t>> members)
    : universe_size_(universe_size), members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("family of subsets must be nonempty");
  for (auto& m : members_) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    if (!m.empty() && m.back() >= universe_size_) {
      throw InvalidArgument("family member escapes the universe");
    }
  }
}

std::uint64_t FamilyOfSubsets::total_size() const {
  std::uint64_t total = 0;
  for (const auto& m : members_) total += m.size();
  return total;
}

SelectionCert select_popular_intersector(const FamilyOfSubsets& family, const Rational& delta) {
  // sum_i |U_i cap U_j| = sum_{v in U_j} deg(v).
  std::vector<std::uint64_t> degree(family.universe_size(), 0);
  for (std::size_t i = 0; i < family.count(); ++i) {
    for (std::size_t v : family.member(i)) ++degree[v];
  }
  std::size_t best = 0;
  std::uint64_t best_score = 0;
  for (std::size_t j = 0; j < family.count(); ++j) {
    std::uint64_t score = 0;
    for (std::size_t v : family.member(j)) score += degree[v];
    if (j == 0 || score > best_score) {
      best = j;
      best_score = score;
    }
  }

  const BigInt r = family.count();
  const BigInt n = family.universe_size();
  SelectionCert out;
  out.chosen = best;
  out.measured = best_score;
  out.precondition = certify("intersector.precondition", "sum_i |U_i| >= r n^(1 - delta)",
                             factor("sum|U_i|", family.total_size()), Relation::ge,
                             Expression(factor("r", r)).times(factor("n", n, {}, 1 - delta)));
  out.threshold = certify("intersector.threshold", "sum_i |U_i cap U_j| >= r n^(1 - 2 delta)",
                          factor("sum|U_i cap U_j|", best_score), Relation::ge,
                          Expression(factor("r", r)).times(factor("n", n, {}, 1 - 2 * delta)));
  out.threshold.tiebreak = "least index";
  return out;
}

PrefixSelection select_popular_prefix(const StringSet& s, const Rational& delta) {
  const int k = s.length();
  if (k < 2 || k % 2 != 0) throw InvalidArgument("select_popular_prefix needs even k");
  const int half = k / 2;
  const std::uint64_t block = s.radix_power(half);
  auto left_degree = s.suffix_counts(half);

  std::vector<std::uint64_t> score(block, 0);
  if (s.form() == StringSet::Form::explicit_list) {
    for (StringCode c : s.stored_codes()) score[c / block] += (*left_degree)[c % block];
  } else {
    std::uint64_t total = 0;
    for (std::uint64_t z = 0; z < block; ++z) total += (*left_degree)[z];
    std::fill(score.begin(), score.end(), total);
    for (StringCode c : s.stored_codes()) score[c / block] -= (*left_degree)[c % block];
  }
  std::size_t best = 0;
  for (std::size_t x = 1; x < score.size(); ++x) {
    if (score[x] > score[best]) best = x;
  }

  PrefixSelection out{StringSet::none(s.ambient(), half).decode(best), StringSet::none(s.ambient(), half), {}};
  out.fiber = right_fiber(s, out.prefix);
  out.cert.chosen = best;
  out.cert.measured = score[best];

  const BigInt a_size = s.ambient().size();
  out.cert.precondition = certify(
      "intersector.precondition", "|S| = sum_y |R_y| >= |A|^(k - delta)",
      factor("|S|", s.size(), {MeasureKind::size, {"S"}}), Relation::ge,
      factor("|A|", a_size, {MeasureKind::size, {"A"}}, Rational(k) - delta));
  out.cert.threshold = certify(
      "intersector.threshold", "sum_y |R_x cap R_y| >= |A|^(k - 2 delta)",
      factor("sum_y|R_x cap R_y|", score[best], {MeasureKind::fiber_overlap, {"S", "x"}}),
      Relation::ge, factor("|A|", a_size, {MeasureKind::size, {"A"}}, Rational(k) - 2 * delta));
  out.cert.threshold.tiebreak = "canonical-least prefix";
  return out;
}

DensePrefixResult dense_prefix_set(const StringSet& s, std::uint64_t theta, const Rational& delta) {
  const int k = s.length();
  if (k < 2 || k % 2 != 0) throw InvalidArgument("dense_prefix_set needs even k");
  const int half = k / 2;
  auto counts = s.prefix_counts(half);
  std::vector<StringCode> dense;
  for (std::size_t x = 0; x < counts->size(); ++x) {
    if ((*counts)[x] >= theta) dense.push_back(x);
  }
  DensePrefixResult out{
      StringSet::from_codes(s.ambient(), half, std::move(dense), StringSet::Form::explicit_list)
          .with_policy(s.explicit_below())
          .normalized(),
      theta,
      {}};
  out.size_cert = certify(
      "dense_prefix.size", "|H| > |A|^(k/2 - 2 delta)",
      factor("|H|", out.dense.size(), {MeasureKind::size, {"H"}}), Relation::gt,
      factor("|A|", BigInt(s.ambient().size()), {MeasureKind::size, {"A"}},
             Rational(half) - 2 * delta));
  return out;
}

CommonSuffixResult select_common_suffix(const StringSet& dense, const StringSet& s,
                                        const StringSet& fiber, const Rational& delta) {
  const int k = s.length();
  const int half = k / 2;
  if (k % 2 != 0 || dense.length() != half || fiber.length() != half) {
    throw InvalidArgument("select_common_suffix: length mismatch");
  }
  if (fiber.empty()) throw InvalidArgument("select_common_suffix: empty R_x");
  const std::uint64_t block = s.radix_power(half);

  // hits[z] = |{h in H : hz in S}|, restricted to z in R_x.
  std::vector<std::uint64_t> hits(block, 0);
  bool nested = true;
  if (s.form() == StringSet::Form::explicit_list) {
    for (StringCode c : s.stored_codes()) {
      StringCode h = c / block;
      StringCode z = c % block;
      if (!dense.contains_code(h)) continue;
      if (!fiber.contains_code(z)) {
        nested = false;
        continue;
      }
      ++hits[z];
    }
  } else {
    const std::uint64_t h_count = dense.size();
    for (StringCode z = 0; z < block; ++z) hits[z] = fiber.contains_code(z) ? h_count : 0;
    for (StringCode c : s.stored_codes()) {
      StringCode z = c % block;
      if (fiber.contains_code(z) && dense.contains_code(c / block)) --hits[z];
    }
    // Complement form: every h in H reaches all z not deleted, so nesting
    // holds iff each missing z is deleted for every h in H.
    if (fiber.size() < block && !dense.empty()) {
      dense.for_each_code([&](StringCode h) {
        if (!nested) return;
        for (StringCode z = 0; z < block; ++z) {
          if (!fiber.contains_code(z) && s.contains_code(h * block + z)) {
            nested = false;
            return;
          }
        }
      });
    }
  }

  StringCode best = block;
  fiber.for_each_code([&](StringCode z) {
    if (best == block || hits[z] > hits[best]) best = z;
  });

  std::vector<StringCode> selected;
  dense.for_each_code([&](StringCode h) {
    if (s.contains_code(h * block + best)) selected.push_back(h);
  });

  CommonSuffixResult out{StringSet::none(s.ambient(), half).decode(best),
                         StringSet::from_codes(s.ambient(), half, std::move(selected),
                                               StringSet::Form::explicit_list)
                             .with_policy(s.explicit_below())
                             .normalized(),
                         nested,
                         {}};
  const BigInt a_size = s.ambient().size();
  const Factor h_prime = factor("|H'|", out.selected.size(), {MeasureKind::size, {"H'"}});
  Certificate averaged = certify(
      "common_suffix.average", "|H'| >= |H| |A|^(-2 delta)", h_prime, Relation::ge,
      Expression(factor("|H|", dense.size(), {MeasureKind::size, {"H"}}))
          .times(factor("|A|", a_size, {MeasureKind::size, {"A"}}, -2 * delta)));
  averaged.tiebreak = "canonical-least suffix";
  out.certs.push_back(std::move(averaged));
  out.certs.push_back(certify(
      "common_suffix.floor", "|H'| >= |A|^(k/2 - 4 delta)", h_prime, Relation::ge,
      factor("|A|", a_size, {MeasureKind::size, {"A"}}, Rational(half) - 4 * delta)));
  return out;
}

const char* to_string(SumCounting counting) {
  return counting == SumCounting::including_self ? "including-self" : "others-only";
}

SumCounting sum_counting_from_string(const std::string& text) {
  if (text == "including-self") return SumCounting::including_self;
  if (text == "others-only") return SumCounting::others_only;
  throw InvalidArgument("unknown sum counting " + text);
}

PopularSumResult popular_sum_filter(const StringSet& selected, SumCounting counting) {
  if (selected.empty()) throw InvalidArgument("popular_sum_filter: empty input");
  const GroupSpec& spec = selected.ambient().spec();
  const auto codes = selected.member_codes();

  std::vector<GroupElem> sums;
  sums.reserve(codes.size());
  std::map<GroupElem, std::uint64_t> class_size;
  for (StringCode c : codes) {
    sums.push_back(sigma_string(spec, selected.decode(c)));
    ++class_size[sums.back()];
  }

  PopularSumResult out{StringSet::none(selected.ambient(), selected.length()), counting,
                       Rational(codes.size()) / (2 * class_size.size()), class_size.size(), {}};
  const std::uint64_t self = counting == SumCounting::others_only ? 1 : 0;
  std::vector<StringCode> kept;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (Rational(class_size[sums[i]] - self) >= out.required) kept.push_back(codes[i]);
  }
  out.popular = StringSet::from_codes(selected.ambient(), selected.length(), std::move(kept),
                                      StringSet::Form::explicit_list)
                    .with_policy(selected.explicit_below())
                    .normalized();
  out.cert = certify("popular_sum.lower", "|H''| >= |H'| / 2",
                     factor("|H''|", out.popular.size(), {MeasureKind::size, {"H''"}}),
                     Relation::ge,
                     Expression(Rational(1, 2))
                         .times(factor("|H'|", codes.size(), {MeasureKind::size, {"H'"}})));
  return out;
}

PopularSuffixResult popular_suffix_extract(const StringSet& strings) {
  const int length = strings.length();
  if (length < 2) throw InvalidArgument("popular_suffix_extract needs strings of length >= 2");
  if (strings.empty()) throw InvalidArgument("popular_suffix_extract: empty input");
  const int tail = length - 1;
  auto counts = strings.suffix_counts(tail);
  std::size_t best = 0;
  for (std::size_t w = 1; w < counts->size(); ++w) {
    if ((*counts)[w] > (*counts)[best]) best = w;
  }
  const StringSet probe = StringSet::none(strings.ambient(), tail);
  const std::uint64_t modulus = probe.universe();
  std::vector<GroupElem> heads;
  strings.for_each_code([&](StringCode c) {
    if (c % modulus == best) heads.push_back(strings.ambient()[c / modulus]);
  });

  PopularSuffixResult out{probe.decode(best), ElemSet(strings.ambient().spec(), std::move(heads)),
                          {}};
  out.cert = certify(
      "popular_suffix.pigeonhole", "|A'| |A|^(k/2 - 1) >= |H'''|",
      Expression(factor("|A'|", out.heads.size(), {MeasureKind::size, {"A'"}}))
          .times(factor("|A|", BigInt(strings.ambient().size()), {MeasureKind::size, {"A"}},
                        Rational(tail))),
      Relation::ge, factor("|H'''|", strings.size(), {MeasureKind::size, {"H'''"}}));
  out.cert.tiebreak = "canonical-least suffix";
  return out;
}

}  // namespace hbsg
