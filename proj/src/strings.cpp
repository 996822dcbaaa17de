#include "hbsg/strings.hpp"

#include "hbsg/errors.hpp"
#include "hbsg/sumset.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

namespace hbsg {

struct StringSet::FiberCache {
  std::mutex mutex;
  std::map<int, std::shared_ptr<const std::vector<std::uint64_t>>> prefix;
  std::map<int, std::shared_ptr<const std::vector<std::uint64_t>>> suffix;
};

namespace {

std::uint64_t checked_power(std::uint64_t base, int exponent) {
  unsigned __int128 value = 1;
  for (int i = 0; i < exponent; ++i) {
    value *= base;
    if (value > (static_cast<unsigned __int128>(1) << 62)) {
      throw BudgetExceeded("|A|^k exceeds the string encoding range");
    }
  }
  return static_cast<std::uint64_t>(value);
}

void require_materializable(std::uint64_t count, const char* what) {
  if (count > StringSet::kMaterializeLimit) {
    throw BudgetExceeded(std::string(what) + ": would materialize " + std::to_string(count) +
                         " strings");
  }
}

// Sorted difference {0..universe-1} \ sorted.
std::vector<StringCode> complement_codes(const std::vector<StringCode>& sorted,
                                         std::uint64_t universe) {
  std::vector<StringCode> out;
  out.reserve(universe - sorted.size());
  auto it = sorted.begin();
  for (StringCode c = 0; c < universe; ++c) {
    if (it != sorted.end() && *it == c) {
      ++it;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

AString concat(const AString& left, const AString& right) {
  AString out = left;
  out.coords.insert(out.coords.end(), right.coords.begin(), right.coords.end());
  return out;
}

StringSet::StringSet(ElemSet ambient, int k, Form form, std::vector<StringCode> sorted_codes,
                     double explicit_below)
    : ambient_(std::move(ambient)),
      k_(k),
      form_(form),
      explicit_below_(explicit_below),
      codes_(std::make_shared<const std::vector<StringCode>>(std::move(sorted_codes))),
      cache_(std::make_shared<FiberCache>()) {
  if (k_ < 1) throw InvalidArgument("string length must be at least 1");
  if (ambient_.empty()) throw InvalidArgument("ambient set must be nonempty");
  universe_ = checked_power(ambient_.size(), k_);
}

StringSet StringSet::full(ElemSet ambient, int k) {
  return StringSet(std::move(ambient), k, Form::complement, {}, kDefaultExplicitBelow);
}

StringSet StringSet::none(ElemSet ambient, int k) {
  return StringSet(std::move(ambient), k, Form::explicit_list, {}, kDefaultExplicitBelow);
}

StringSet StringSet::from_codes(ElemSet ambient, int k, std::vector<StringCode> codes,
                                Form form) {
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  StringSet out(std::move(ambient), k, form, {}, kDefaultExplicitBelow);
  if (!codes.empty() && codes.back() >= out.universe_) {
    throw InvalidArgument("string code outside A^k");
  }
  out.codes_ = std::make_shared<const std::vector<StringCode>>(std::move(codes));
  return out;
}

StringSet StringSet::from_strings(ElemSet ambient, int k, std::span<const AString> members) {
  StringSet probe = none(ambient, k);
  std::vector<StringCode> codes;
  codes.reserve(members.size());
  for (const auto& s : members) codes.push_back(probe.encode(s));
  return from_codes(std::move(ambient), k, std::move(codes), Form::explicit_list);
}

StringSet StringSet::with_deletions(ElemSet ambient, int k, std::span<const AString> deleted) {
  StringSet probe = none(ambient, k);
  std::vector<StringCode> codes;
  codes.reserve(deleted.size());
  for (const auto& s : deleted) codes.push_back(probe.encode(s));
  return from_codes(std::move(ambient), k, std::move(codes), Form::complement);
}

std::uint64_t StringSet::size() const {
  return form_ == Form::explicit_list ? codes_->size() : universe_ - codes_->size();
}

double StringSet::density() const {
  return static_cast<double>(size()) / static_cast<double>(universe_);
}

StringSet StringSet::with_policy(double explicit_below) const {
  if (!(explicit_below >= 0.0 && explicit_below <= 1.0)) {
    throw InvalidArgument("density threshold must lie in [0, 1]");
  }
  StringSet out = *this;
  out.explicit_below_ = explicit_below;
  return out;
}

bool StringSet::contains_code(StringCode code) const {
  if (code >= universe_) return false;
  bool stored = std::binary_search(codes_->begin(), codes_->end(), code);
  return form_ == Form::explicit_list ? stored : !stored;
}

bool StringSet::contains(const AString& s) const {
  if (s.length() != static_cast<std::size_t>(k_)) return false;
  StringCode code = 0;
  for (GroupElem e : s.coords) {
    auto idx = ambient_.index_of(e);
    if (!idx) return false;
    code = code * ambient_.size() + *idx;
  }
  return contains_code(code);
}

StringCode StringSet::encode(const AString& s) const {
  if (s.length() != static_cast<std::size_t>(k_)) {
    throw InvalidArgument("string of length " + std::to_string(s.length()) +
                          " in a set of length " + std::to_string(k_));
  }
  StringCode code = 0;
  for (GroupElem e : s.coords) {
    auto idx = ambient_.index_of(e);
    if (!idx) {
      throw InvalidArgument("coordinate " + std::to_string(e.value) + " is not in the ambient set");
    }
    code = code * ambient_.size() + *idx;
  }
  return code;
}

AString StringSet::decode(StringCode code) const {
  AString s;
  s.coords.resize(static_cast<std::size_t>(k_));
  const std::uint64_t base = ambient_.size();
  for (int i = k_ - 1; i >= 0; --i) {
    s.coords[static_cast<std::size_t>(i)] = ambient_[code % base];
    code /= base;
  }
  return s;
}

std::uint64_t StringSet::radix_power(int j) const { return checked_power(ambient_.size(), j); }

std::vector<StringCode> StringSet::member_codes() const {
  if (form_ == Form::explicit_list) return *codes_;
  require_materializable(size(), "member_codes");
  return complement_codes(*codes_, universe_);
}

std::vector<AString> StringSet::strings() const {
  std::vector<AString> out;
  for (StringCode c : member_codes()) out.push_back(decode(c));
  return out;
}

StringSet StringSet::as_explicit() const {
  if (form_ == Form::explicit_list) return *this;
  StringSet out(ambient_, k_, Form::explicit_list, member_codes(), explicit_below_);
  return out;
}

StringSet StringSet::as_complement() const {
  if (form_ == Form::complement) return *this;
  require_materializable(universe_ - size(), "as_complement");
  return StringSet(ambient_, k_, Form::complement, complement_codes(*codes_, universe_),
                   explicit_below_);
}

StringSet StringSet::normalized() const {
  const bool want_explicit = density() < explicit_below_;
  if (want_explicit && form_ == Form::complement && size() <= kMaterializeLimit) {
    return as_explicit();
  }
  if (!want_explicit && form_ == Form::explicit_list && universe_ - size() <= kMaterializeLimit) {
    return as_complement();
  }
  return *this;
}

std::shared_ptr<const std::vector<std::uint64_t>> StringSet::prefix_counts(int j) const {
  if (j < 1 || j >= k_) throw InvalidArgument("prefix length out of range");
  std::lock_guard lock(cache_->mutex);
  if (auto it = cache_->prefix.find(j); it != cache_->prefix.end()) return it->second;
  const std::uint64_t prefixes = radix_power(j);
  require_materializable(prefixes, "prefix_counts");
  const std::uint64_t block = radix_power(k_ - j);
  std::vector<std::uint64_t> counts(prefixes,
                                    form_ == Form::explicit_list ? 0 : block);
  for (StringCode c : *codes_) {
    if (form_ == Form::explicit_list) {
      ++counts[c / block];
    } else {
      --counts[c / block];
    }
  }
  auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(counts));
  cache_->prefix.emplace(j, shared);
  return shared;
}

std::shared_ptr<const std::vector<std::uint64_t>> StringSet::suffix_counts(int j) const {
  if (j < 1 || j >= k_) throw InvalidArgument("suffix length out of range");
  std::lock_guard lock(cache_->mutex);
  if (auto it = cache_->suffix.find(j); it != cache_->suffix.end()) return it->second;
  const std::uint64_t suffixes = radix_power(j);
  require_materializable(suffixes, "suffix_counts");
  const std::uint64_t block = radix_power(k_ - j);
  std::vector<std::uint64_t> counts(suffixes,
                                    form_ == Form::explicit_list ? 0 : block);
  for (StringCode c : *codes_) {
    if (form_ == Form::explicit_list) {
      ++counts[c % suffixes];
    } else {
      --counts[c % suffixes];
    }
  }
  auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(counts));
  cache_->suffix.emplace(j, shared);
  return shared;
}

bool operator==(const StringSet& a, const StringSet& b) {
  if (!(a.ambient_ == b.ambient_) || a.k_ != b.k_ || a.size() != b.size()) return false;
  if (a.form_ == b.form_) return *a.codes_ == *b.codes_;
  const StringSet& expl = a.form_ == StringSet::Form::explicit_list ? a : b;
  const StringSet& comp = a.form_ == StringSet::Form::explicit_list ? b : a;
  return std::none_of(expl.codes_->begin(), expl.codes_->end(), [&](StringCode c) {
    return std::binary_search(comp.codes_->begin(), comp.codes_->end(), c);
  });
}

GroupElem sigma_string(const GroupSpec& spec, const AString& x) {
  if (x.coords.empty()) throw InvalidArgument("sum of an empty string");
  GroupElem total = x.coords.front();
  for (std::size_t i = 1; i < x.coords.size(); ++i) total = spec.add(total, x.coords[i]);
  return total;
}

ElemSet sigma(const StringSet& s) {
  const ElemSet& ambient = s.ambient();
  const GroupSpec& spec = ambient.spec();
  if (s.empty()) return ElemSet(spec);

  if (s.form() == StringSet::Form::explicit_list) {
    std::vector<GroupElem> sums;
    sums.reserve(s.stored_codes().size());
    for (StringCode c : s.stored_codes()) sums.push_back(sigma_string(spec, s.decode(c)));
    return ElemSet(spec, std::move(sums));
  }
  if (s.stored_codes().empty()) return iterated_sumset(ambient, s.length());

  // Multiplicity of each sum over the full product A^k.
  std::map<GroupElem, std::uint64_t> counts;
  for (GroupElem a : ambient) counts[a] = 1;
  for (int step = 1; step < s.length(); ++step) {
    std::map<GroupElem, std::uint64_t> next;
    for (const auto& [sum, count] : counts) {
      for (GroupElem a : ambient) next[spec.add(sum, a)] += count;
    }
    counts = std::move(next);
  }
  for (StringCode c : s.stored_codes()) --counts[sigma_string(spec, s.decode(c))];

  std::vector<GroupElem> present;
  for (const auto& [sum, count] : counts) {
    if (count > 0) present.push_back(sum);
  }
  return make_sorted_set(spec, std::move(present));
}

StringSet right_fiber(const StringSet& s, const AString& prefix) {
  const int j = static_cast<int>(prefix.length());
  if (j < 1 || j >= s.length()) throw InvalidArgument("right_fiber: prefix length out of range");
  StringSet probe = StringSet::none(s.ambient(), j);
  const StringCode x = probe.encode(prefix);
  const std::uint64_t block = s.radix_power(s.length() - j);
  const StringCode lo = x * block;
  auto codes = s.stored_codes();
  auto first = std::lower_bound(codes.begin(), codes.end(), lo);
  auto last = std::lower_bound(first, codes.end(), lo + block);
  std::vector<StringCode> fiber;
  fiber.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) fiber.push_back(*it - lo);
  return StringSet::from_codes(s.ambient(), s.length() - j, std::move(fiber), s.form())
      .with_policy(s.explicit_below())
      .normalized();
}

StringSet left_fiber(const StringSet& s, const AString& suffix) {
  const int j = static_cast<int>(suffix.length());
  if (j < 1 || j >= s.length()) throw InvalidArgument("left_fiber: suffix length out of range");
  StringSet probe = StringSet::none(s.ambient(), j);
  const StringCode y = probe.encode(suffix);
  const std::uint64_t modulus = s.radix_power(j);
  std::vector<StringCode> fiber;
  for (StringCode c : s.stored_codes()) {
    if (c % modulus == y) fiber.push_back(c / modulus);
  }
  return StringSet::from_codes(s.ambient(), s.length() - j, std::move(fiber), s.form())
      .with_policy(s.explicit_below())
      .normalized();
}

StringSet append_suffix(const StringSet& s, const AString& suffix) {
  const int j = static_cast<int>(suffix.length());
  if (j == 0) return s;
  StringSet probe = StringSet::none(s.ambient(), j);
  const StringCode y = probe.encode(suffix);
  const std::uint64_t modulus = probe.universe();
  StringSet::none(s.ambient(), s.length() + j);  // range check of the new length
  require_materializable(s.size(), "append_suffix");
  std::vector<StringCode> codes;
  codes.reserve(s.size());
  s.for_each_code([&](StringCode c) { codes.push_back(c * modulus + y); });
  return StringSet::from_codes(s.ambient(), s.length() + j, std::move(codes),
                               StringSet::Form::explicit_list)
      .with_policy(s.explicit_below());
}

StringSet restrict_by_right(const StringSet& s, const StringSet& suffixes) {
  const int m = suffixes.length();
  if (m < 1 || m >= s.length()) throw InvalidArgument("restrict_by_right: length mismatch");
  if (!(suffixes.ambient() == s.ambient())) {
    throw SpecMismatch("restrict_by_right: different ambient sets");
  }
  const std::uint64_t modulus = suffixes.universe();
  const std::uint64_t prefixes = s.radix_power(s.length() - m);

  std::vector<StringCode> codes;
  StringSet::Form form = StringSet::Form::explicit_list;
  if (s.form() == StringSet::Form::explicit_list) {
    for (StringCode c : s.stored_codes()) {
      if (suffixes.contains_code(c % modulus)) codes.push_back(c);
    }
  } else if (suffixes.form() == StringSet::Form::complement) {
    // A^k \ (D u (A^(k-m) x D_R)).
    form = StringSet::Form::complement;
    auto dropped = suffixes.stored_codes();
    require_materializable(s.stored_codes().size() + prefixes * dropped.size(),
                           "restrict_by_right");
    codes.assign(s.stored_codes().begin(), s.stored_codes().end());
    for (std::uint64_t p = 0; p < prefixes; ++p) {
      for (StringCode z : dropped) codes.push_back(p * modulus + z);
    }
  } else {
    auto kept = suffixes.stored_codes();
    require_materializable(prefixes * kept.size(), "restrict_by_right");
    for (std::uint64_t p = 0; p < prefixes; ++p) {
      for (StringCode z : kept) {
        StringCode c = p * modulus + z;
        if (s.contains_code(c)) codes.push_back(c);
      }
    }
  }
  return StringSet::from_codes(s.ambient(), s.length(), std::move(codes), form)
      .with_policy(s.explicit_below())
      .normalized();
}

PowerOfTwoReduction reduce_to_power_of_two(const StringSet& s) {
  const int k = s.length();
  const int k_reduced = static_cast<int>(std::bit_floor(static_cast<unsigned>(k)));
  PowerOfTwoReduction out{s, {}, s, k, k_reduced, {}};
  if (k_reduced == k) return out;

  const int tail = k - k_reduced;
  auto counts = s.suffix_counts(tail);
  std::size_t best = 0;
  for (std::size_t y = 1; y < counts->size(); ++y) {
    if ((*counts)[y] > (*counts)[best]) best = y;
  }
  StringSet probe = StringSet::none(s.ambient(), tail);
  out.suffix = probe.decode(best);
  out.reduced = left_fiber(s, out.suffix);
  out.reduced_with_suffix = append_suffix(out.reduced, out.suffix);

  const BigInt a_size = s.ambient().size();
  Certificate pigeonhole = certify(
      "reduce.pigeonhole", "|S'| >= |S| / |A|^(k - k')",
      factor("|S'|", out.reduced.size(), {MeasureKind::size, {"S_reduced"}}), Relation::ge,
      Expression(factor("|S|", s.size(), {MeasureKind::size, {"S"}}))
          .times(factor("|A|", a_size, {MeasureKind::size, {"A"}}, Rational(-tail))));
  pigeonhole.tiebreak = "canonical-least suffix";
  out.certs.push_back(std::move(pigeonhole));
  out.certs.push_back(certify(
      "reduce.sigma", "|Sigma(S' y)| <= |Sigma(S)|",
      factor("|Sigma(S'y)|", sigma(out.reduced_with_suffix).size(),
             {MeasureKind::sigma_size, {"S_reduced_y"}}),
      Relation::le, factor("|Sigma(S)|", sigma(s).size(), {MeasureKind::sigma_size, {"S"}})));
  return out;
}

BipartiteGraph::BipartiteGraph(std::size_t left, std::size_t right, std::vector<Edge> edges)
    : left_(left), right_(right), edges_(std::move(edges)) {
  for (const auto& [i, j] : edges_) {
    if (i >= left_ || j >= right_) throw InvalidArgument("edge index out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

BipartiteGraph BipartiteGraph::complete(std::size_t left, std::size_t right) {
  std::vector<Edge> edges;
  edges.reserve(left * right);
  for (std::size_t i = 0; i < left; ++i) {
    for (std::size_t j = 0; j < right; ++j) edges.emplace_back(i, j);
  }
  return BipartiteGraph(left, right, std::move(edges));
}

ElemSet graph_restricted_sumset(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g) {
  require_same_spec(a, b, "graph_restricted_sumset");
  if (g.left_size() != a.size() || g.right_size() != b.size()) {
    throw InvalidArgument("graph dimensions do not match the sets");
  }
  std::vector<GroupElem> sums;
  sums.reserve(g.edge_count());
  for (const auto& [i, j] : g.edges()) sums.push_back(a.spec().add(a[i], b[j]));
  return ElemSet(a.spec(), std::move(sums));
}

bool SsvReport::conclusions_pass() const {
  return std::all_of(conclusions.begin(), conclusions.end(),
                     [](const Certificate& c) { return c.pass; });
}

SsvReport ssv_bound_check(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g,
                          const ElemSet& a_prime, const ElemSet& b_prime, const Rational& K,
                          const Rational& C) {
  if (a.size() != b.size()) throw InvalidArgument("ssv_bound_check needs |A| == |B|");
  if (!a_prime.is_subset_of(a) || !b_prime.is_subset_of(b)) {
    throw InvalidArgument("ssv_bound_check: candidates must be subsets of A and B");
  }
  if (K <= 0 || C <= 0) throw InvalidArgument("ssv_bound_check: K and C must be positive");
  SsvReport report;
  report.n = a.size();
  const BigInt n = a.size();
  const Factor n_factor = factor("n", n, {MeasureKind::size, {"A"}});

  report.hypotheses.push_back(certify(
      "ssv.edges", "|E| >= n^2 / K", factor("|E|", g.edge_count()), Relation::ge,
      Expression(Rational(1) / K).times(factor("n", n, {MeasureKind::size, {"A"}}, 2))));
  report.hypotheses.push_back(certify(
      "ssv.restricted_sumset", "|A +_G B| <= C n",
      factor("|A+_G B|", graph_restricted_sumset(a, b, g).size()), Relation::le,
      Expression(C).times(n_factor)));

  report.conclusions.push_back(certify(
      "ssv.left_size", "|A'| >= n / (16 K^2)",
      factor("|A'|", a_prime.size(), {MeasureKind::size, {"A'"}}), Relation::ge,
      Expression(Rational(1) / (16 * K * K)).times(n_factor)));
  report.conclusions.push_back(certify(
      "ssv.right_size", "|B'| >= n / (4 K)",
      factor("|B'|", b_prime.size(), {MeasureKind::size, {"B'"}}), Relation::ge,
      Expression(Rational(1) / (4 * K)).times(n_factor)));
  report.conclusions.push_back(certify(
      "ssv.sumset", "|A' + B'| <= 2^12 C^3 K^5 n",
      factor("|A'+B'|", sumset(a_prime, b_prime).size(),
             {MeasureKind::sumset_size, {"A'", "B'"}}),
      Relation::le, Expression(Rational(4096) * C * C * C * K * K * K * K * K).times(n_factor)));
  return report;
}

}  // namespace hbsg
