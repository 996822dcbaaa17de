#include "hbsg/oracle.hpp"

#include "hbsg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>

namespace hbsg::oracle {

namespace {

std::uint64_t power_or_cap(std::uint64_t base, int exponent, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

void require_budget(std::uint64_t count, const OracleLimits& limits, const char* what) {
  if (count > limits.max_enumeration) {
    throw BudgetExceeded(std::string("oracle budget exceeded: ") + what);
  }
}

ElemSet from_values(const GroupSpec& spec, const std::set<std::int64_t>& values) {
  std::vector<GroupElem> out;
  out.reserve(values.size());
  for (std::int64_t v : values) out.push_back(GroupElem{v});
  return ElemSet(spec, std::move(out));
}

AString join(const AString& a, const AString& b) {
  AString out = a;
  out.coords.insert(out.coords.end(), b.coords.begin(), b.coords.end());
  return out;
}

AString slice(const AString& s, std::size_t from, std::size_t count) {
  AString out;
  out.coords.assign(s.coords.begin() + static_cast<std::ptrdiff_t>(from),
                    s.coords.begin() + static_cast<std::ptrdiff_t>(from + count));
  return out;
}

}  // namespace

GroupElem add(const GroupSpec& spec, GroupElem a, GroupElem b) {
  switch (spec.kind()) {
    case GroupSpec::Kind::cyclic: {
      __int128 s = static_cast<__int128>(a.value) + b.value;
      return GroupElem{static_cast<std::int64_t>(s % spec.modulus())};
    }
    case GroupSpec::Kind::vector_space: {
      const std::int64_t p = spec.prime();
      std::int64_t x = a.value, y = b.value, place = 1, out = 0;
      for (int i = 0; i < spec.dimension(); ++i) {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        if (i + 1 < spec.dimension()) place *= p;
      }
      return GroupElem{out};
    }
    case GroupSpec::Kind::integer_window: {
      __int128 s = static_cast<__int128>(a.value) + b.value;
      if (s < spec.lo() || s > spec.hi()) throw WindowOverflow("oracle sum leaves the window");
      return GroupElem{static_cast<std::int64_t>(s)};
    }
  }
  return a;
}

GroupElem negate(const GroupSpec& spec, GroupElem a) {
  switch (spec.kind()) {
    case GroupSpec::Kind::cyclic: return GroupElem{(spec.modulus() - a.value) % spec.modulus()};
    case GroupSpec::Kind::vector_space: {
      const std::int64_t p = spec.prime();
      std::int64_t x = a.value, place = 1, out = 0;
      for (int i = 0; i < spec.dimension(); ++i) {
        out += ((p - x % p) % p) * place;
        x /= p;
        if (i + 1 < spec.dimension()) place *= p;
      }
      return GroupElem{out};
    }
    case GroupSpec::Kind::integer_window: {
      __int128 n = -static_cast<__int128>(a.value);
      if (n < spec.lo() || n > spec.hi()) throw WindowOverflow("oracle negation leaves the window");
      return GroupElem{static_cast<std::int64_t>(n)};
    }
  }
  return a;
}

ElemSet brute_sumset(const ElemSet& x, const ElemSet& y, const OracleLimits& limits) {
  require_budget(static_cast<std::uint64_t>(x.size()) * y.size(), limits, "sumset");
  std::set<std::int64_t> out;
  for (GroupElem a : x) {
    for (GroupElem b : y) out.insert(add(x.spec(), a, b).value);
  }
  return from_values(x.spec(), out);
}

ElemSet brute_difference(const ElemSet& x, const ElemSet& y, const OracleLimits& limits) {
  require_budget(static_cast<std::uint64_t>(x.size()) * y.size(), limits, "difference");
  std::set<std::int64_t> out;
  for (GroupElem a : x) {
    for (GroupElem b : y) out.insert(add(x.spec(), a, negate(x.spec(), b)).value);
  }
  return from_values(x.spec(), out);
}

ElemSet brute_iterated(const ElemSet& x, int ell, const OracleLimits& limits) {
  if (ell < 1) throw InvalidArgument("ell must be at least 1");
  ElemSet out = x;
  for (int i = 1; i < ell; ++i) out = brute_sumset(out, x, limits);
  return out;
}

std::uint64_t brute_energy(const ElemSet& x, const ElemSet& y, const OracleLimits& limits) {
  const std::uint64_t nx = x.size(), ny = y.size();
  require_budget(nx * ny * nx * ny, limits, "energy");
  std::uint64_t count = 0;
  for (GroupElem x1 : x) {
    for (GroupElem y1 : y) {
      const GroupElem s = add(x.spec(), x1, y1);
      for (GroupElem x2 : x) {
        for (GroupElem y2 : y) count += add(x.spec(), x2, y2) == s;
      }
    }
  }
  return count;
}

ElemSet brute_graph_sumset(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g) {
  std::set<std::int64_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto edges = g.edges();
      if (std::find(edges.begin(), edges.end(), BipartiteGraph::Edge{i, j}) != edges.end()) {
        out.insert(add(a.spec(), a[i], b[j]).value);
      }
    }
  }
  return from_values(a.spec(), out);
}

std::vector<AString> all_strings(const ElemSet& ambient, int length, const OracleLimits& limits) {
  if (length < 0) throw InvalidArgument("negative length");
  if (ambient.size() > limits.max_ambient || length > limits.max_k) {
    throw BudgetExceeded("oracle limits on |A| or k exceeded");
  }
  require_budget(power_or_cap(ambient.size(), length, limits.max_enumeration), limits, "strings");
  std::vector<AString> out;
  if (ambient.empty() && length > 0) return out;
  std::vector<std::size_t> digits(static_cast<std::size_t>(length), 0);
  while (true) {
    AString s;
    for (std::size_t d : digits) s.coords.push_back(ambient[d]);
    out.push_back(std::move(s));
    int pos = length - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == ambient.size()) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

std::vector<AString> brute_members(const StringSet& s, const OracleLimits& limits) {
  std::vector<AString> out;
  for (auto& str : all_strings(s.ambient(), s.length(), limits)) {
    if (s.contains(str)) out.push_back(std::move(str));
  }
  return out;
}

GroupElem brute_string_sum(const GroupSpec& spec, const AString& x) {
  if (x.coords.empty()) throw InvalidArgument("sum of an empty string");
  GroupElem total = x.coords.front();
  for (std::size_t i = 1; i < x.coords.size(); ++i) total = add(spec, total, x.coords[i]);
  return total;
}

ElemSet brute_sigma(const StringSet& s, const OracleLimits& limits) {
  std::set<std::int64_t> out;
  for (const auto& str : brute_members(s, limits)) {
    out.insert(brute_string_sum(s.ambient().spec(), str).value);
  }
  return from_values(s.ambient().spec(), out);
}

std::vector<AString> brute_fiber(const StringSet& s, const AString& prefix,
                                 const OracleLimits& limits) {
  const int rest = s.length() - static_cast<int>(prefix.length());
  if (rest < 1 || prefix.length() < 1) throw InvalidArgument("prefix length out of range");
  std::vector<AString> out;
  for (auto& tail : all_strings(s.ambient(), rest, limits)) {
    if (s.contains(join(prefix, tail))) out.push_back(std::move(tail));
  }
  return out;
}

std::vector<AString> brute_left_fiber(const StringSet& s, const AString& suffix,
                                      const OracleLimits& limits) {
  const int rest = s.length() - static_cast<int>(suffix.length());
  if (rest < 1 || suffix.length() < 1) throw InvalidArgument("suffix length out of range");
  std::vector<AString> out;
  for (auto& head : all_strings(s.ambient(), rest, limits)) {
    if (s.contains(join(head, suffix))) out.push_back(std::move(head));
  }
  return out;
}

std::uint64_t brute_fiber_overlap(const StringSet& s, const AString& x, const OracleLimits& limits) {
  const auto fiber_x = brute_fiber(s, x, limits);
  std::uint64_t total = 0;
  for (const auto& y : all_strings(s.ambient(), static_cast<int>(x.length()), limits)) {
    for (const auto& z : fiber_x) total += s.contains(join(y, z));
  }
  return total;
}

SubsetGrowth best_subset_growth(const ElemSet& a, int ell, std::size_t min_size,
                                const OracleLimits& limits) {
  const std::size_t n = a.size();
  if (n > limits.max_subset_ground) throw BudgetExceeded("subset search ground set too large");
  if (min_size < 1 || min_size > n) throw InvalidArgument("min_size out of range");
  // ell X grows under inclusion, so the minimum over |X*| >= s is attained at
  // |X*| = s; only those subsets are enumerated.
  std::optional<SubsetGrowth> best;
  std::vector<std::size_t> pick(min_size);
  for (std::size_t i = 0; i < min_size; ++i) pick[i] = i;
  while (true) {
    std::vector<GroupElem> chosen;
    for (std::size_t i : pick) chosen.push_back(a[i]);
    ElemSet subset(a.spec(), chosen);
    const std::uint64_t size = brute_iterated(subset, ell, limits).size();
    if (!best || size < best->size) best = SubsetGrowth{subset, size};
    // Next combination in lexicographic order.
    std::size_t pos = min_size;
    while (pos > 0 && pick[pos - 1] == n - min_size + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t i = pos; i < min_size; ++i) pick[i] = pick[i - 1] + 1;
  }
  return *best;
}

Verdict compare_expressions(const Expression& lhs, const Expression& rhs) {
  struct Term {
    BigInt base;
    Rational exponent;
    bool left;
  };
  std::vector<Term> terms;
  for (const auto& f : lhs.factors) terms.push_back({f.value, f.exponent, true});
  for (const auto& f : rhs.factors) terms.push_back({f.value, f.exponent, false});

  auto is_zero = [&](bool left) {
    const Expression& e = left ? lhs : rhs;
    if (e.coefficient == 0) return true;
    for (const auto& t : terms) {
      if (t.left == left && t.base == 0 && t.exponent > 0) return true;
    }
    return false;
  };
  const bool lz = is_zero(true), rz = is_zero(false);
  if (lz || rz) return Verdict{lz && rz ? 0 : (lz ? -1 : 1), true};

  BigInt d = 1;
  for (const auto& t : terms) {
    const BigInt den = denominator(t.exponent);
    d = d / boost::multiprecision::gcd(d, den) * den;
  }

  long double bits = 0;
  long double log_l = std::log2(static_cast<long double>(lhs.coefficient.convert_to<double>()));
  long double log_r = std::log2(static_cast<long double>(rhs.coefficient.convert_to<double>()));
  for (const auto& t : terms) {
    const long double lb = std::log2(t.base.convert_to<long double>());
    const long double e = t.exponent.convert_to<long double>();
    bits += std::fabs(e * d.convert_to<long double>()) * (lb + 1);
    (t.left ? log_l : log_r) += e * lb;
  }
  if (bits > (1 << 21)) {
    const long double diff = log_l - log_r;
    return Verdict{diff > 0 ? 1 : (diff < 0 ? -1 : 0), false};
  }

  // value^d = num / den on each side.
  const unsigned dd = d.convert_to<unsigned>();
  BigInt num_l = boost::multiprecision::pow(numerator(lhs.coefficient), dd);
  BigInt den_l = boost::multiprecision::pow(denominator(lhs.coefficient), dd);
  BigInt num_r = boost::multiprecision::pow(numerator(rhs.coefficient), dd);
  BigInt den_r = boost::multiprecision::pow(denominator(rhs.coefficient), dd);
  for (const auto& t : terms) {
    const Rational scaled = t.exponent * Rational(d);
    const BigInt e = numerator(scaled);  // denominator is 1 here
    const unsigned magnitude = (e < 0 ? BigInt(-e) : e).convert_to<unsigned>();
    const BigInt p = boost::multiprecision::pow(t.base, magnitude);
    if (e >= 0) {
      (t.left ? num_l : num_r) *= p;
    } else {
      (t.left ? den_l : den_r) *= p;
    }
  }
  const BigInt a = num_l * den_r;
  const BigInt b = num_r * den_l;
  return Verdict{a > b ? 1 : (a < b ? -1 : 0), true};
}

bool holds(const Verdict& v, Relation relation) {
  switch (relation) {
    case Relation::ge: return v.sign >= 0;
    case Relation::gt: return v.sign > 0;
    case Relation::le: return v.sign <= 0;
    case Relation::lt: return v.sign < 0;
    case Relation::eq: return v.sign == 0;
  }
  return false;
}

namespace {

class Auditor {
 public:
  Auditor(const SetStore& store, const OracleLimits& limits) : store_(store), limits_(limits) {}

  AuditReport run(const CertificateLedger& ledger) {
    for (const auto& e : ledger.entries()) {
      ++report_.entries;
      try {
        if (e.cert) audit_cert(e.index, *e.cert);
        if (e.containment) audit_containment(e.index, *e.containment);
        if (!e.rule.empty()) audit_rule(e);
        if (e.kind == EntryKind::reassignment) audit_reassignment(e);
      } catch (const std::exception& ex) {
        issue(e.index, std::string("audit error: ") + ex.what());
      }
    }
    return std::move(report_);
  }

 private:
  void issue(std::size_t index, std::string what) {
    report_.issues.push_back(AuditIssue{index, std::move(what)});
  }

  const StringSet& strings(const std::string& key) const { return store_.string_set(key); }
  const ElemSet& elems(const std::string& key) const { return store_.elem_set(key); }

  const std::vector<AString>& members(const std::string& key) {
    auto it = members_.find(key);
    if (it == members_.end()) it = members_.emplace(key, brute_members(strings(key), limits_)).first;
    return it->second;
  }

  const ElemSet& sigma_of(const std::string& key) {
    auto it = sigma_.find(key);
    if (it == sigma_.end()) {
      std::set<std::int64_t> sums;
      const GroupSpec& spec = strings(key).ambient().spec();
      for (const auto& s : members(key)) sums.insert(brute_string_sum(spec, s).value);
      it = sigma_.emplace(key, from_values(spec, sums)).first;
    }
    return it->second;
  }

  std::uint64_t size_of(const std::string& key) {
    const auto& v = store_.get(key);
    if (std::holds_alternative<StringSet>(v)) return members(key).size();
    if (auto* e = std::get_if<ElemSet>(&v)) return e->size();
    return std::get<AString>(v).length();
  }

  std::optional<BigInt> recompute(const Factor& f) {
    const auto& ops = f.measure.operands;
    switch (f.measure.kind) {
      case MeasureKind::given: return std::nullopt;
      case MeasureKind::size: return BigInt(size_of(ops.at(0)));
      case MeasureKind::sigma_size: return BigInt(sigma_of(ops.at(0)).size());
      case MeasureKind::energy:
        return BigInt(brute_energy(elems(ops.at(0)), elems(ops.at(1)), limits_));
      case MeasureKind::sigma_energy:
        return BigInt(brute_energy(sigma_of(ops.at(0)), sigma_of(ops.at(1)), limits_));
      case MeasureKind::sumset_size:
        return BigInt(brute_sumset(elems(ops.at(0)), elems(ops.at(1)), limits_).size());
      case MeasureKind::iterated_sumset_size:
        return BigInt(brute_iterated(elems(ops.at(0)), f.measure.ell, limits_).size());
      case MeasureKind::fiber_overlap:
        return BigInt(brute_fiber_overlap(strings(ops.at(0)), store_.string(ops.at(1)), limits_));
    }
    return std::nullopt;
  }

  Expression recompute(std::size_t index, const Expression& e) {
    Expression out = e;
    for (auto& f : out.factors) {
      auto value = recompute(f);
      if (!value) {
        ++report_.factors_skipped;
        continue;
      }
      ++report_.factors_checked;
      if (*value != f.value) {
        issue(index, "factor " + f.label + " recorded " + f.value.str() + ", recomputed " +
                         value->str());
      }
      f.value = *value;
    }
    return out;
  }

  void audit_cert(std::size_t index, const Certificate& cert) {
    const Expression lhs = recompute(index, cert.lhs);
    const Expression rhs = recompute(index, cert.rhs);
    const Verdict v = compare_expressions(lhs, rhs);
    ++report_.relations_checked;
    if (holds(v, cert.relation) != cert.pass) {
      issue(index, cert.op + ": recorded pass=" + std::to_string(cert.pass) +
                       " but independent evaluation disagrees");
    }
    if (!cert.threshold) return;
    // The recorded integer threshold must be the rounding the cert claims.
    const Expression t(Rational(*cert.threshold));
    const Expression t_minus(Rational(*cert.threshold - 1));
    const Expression t_plus(Rational(*cert.threshold + 1));
    auto cmp = [&](const Expression& a) { return compare_expressions(a, rhs).sign; };
    bool ok = true;
    switch (cert.relation) {
      case Relation::ge: ok = cmp(t) >= 0 && cmp(t_minus) < 0; break;
      case Relation::gt: ok = cmp(t) > 0 && cmp(t_minus) <= 0; break;
      case Relation::le: ok = cmp(t) <= 0 && cmp(t_plus) > 0; break;
      case Relation::lt: ok = cmp(t) < 0 && cmp(t_plus) >= 0; break;
      case Relation::eq: ok = cmp(t) == 0; break;
    }
    if (!ok) issue(index, cert.op + ": recorded threshold " + cert.threshold->str() + " is off");
  }

  void audit_containment(std::size_t index, const Containment& c) {
    ++report_.containments_checked;
    std::uint64_t checked = 0, missing = 0;
    if (c.op == "final.containment") {
      const ElemSet& a = elems(c.operands.at(0));
      const AString& w = store_.string(c.operands.at(1));
      const ElemSet& sig = elems(c.operands.at(2));
      const GroupSpec& spec = a.spec();
      const GroupElem sw = brute_string_sum(spec, w);
      const GroupElem shift = add(spec, sw, sw);
      const ElemSet target = brute_sumset(sig, sig, limits_);
      for (GroupElem x : a) {
        for (GroupElem y : a) {
          ++checked;
          missing += !target.contains(add(spec, add(spec, x, y), shift));
        }
      }
    } else if (c.op == "h_stage.nesting") {
      const StringSet& s = strings(c.operands.at(1));
      const StringSet& fiber = strings(c.operands.at(2));
      const auto tails = all_strings(s.ambient(), fiber.length(), limits_);
      bool nested = true;
      for (const auto& h : members(c.operands.at(0))) {
        ++checked;
        for (const auto& z : tails) {
          if (s.contains(join(h, z)) && !fiber.contains(z)) nested = false;
        }
      }
      missing = nested ? 0 : 1;
    } else {
      issue(index, "unknown containment " + c.op);
      return;
    }
    if (checked != c.checked || missing != c.missing || (missing == 0) != c.pass) {
      issue(index, c.op + ": containment counts disagree (" + std::to_string(checked) + "/" +
                       std::to_string(missing) + ")");
    }
  }

  std::string detail(const LedgerEntry& e, const std::string& key) const {
    for (const auto& [k, v] : e.details) {
      if (k == key) return v;
    }
    throw InvalidArgument("ledger entry lacks detail " + key);
  }

  void expect_strings(const LedgerEntry& e, std::vector<AString> expected) {
    std::sort(expected.begin(), expected.end());
    if (expected != members(e.output)) issue(e.index, e.rule + ": output differs from replay");
  }

  void expect_elems(const LedgerEntry& e, const ElemSet& expected) {
    if (!(expected == elems(e.output))) issue(e.index, e.rule + ": output differs from replay");
  }

  // Least maximizer of score over candidates in order.
  template <class Score>
  std::optional<AString> least_argmax(const std::vector<AString>& candidates, Score score) {
    std::optional<AString> best;
    std::uint64_t best_score = 0;
    for (const auto& c : candidates) {
      std::uint64_t v = score(c);
      if (!best || v > best_score) {
        best = c;
        best_score = v;
      }
    }
    return best;
  }

  void expect_choice(const LedgerEntry& e, const std::optional<AString>& expected) {
    if (!expected || *expected != store_.string(e.output)) {
      issue(e.index, e.rule + ": selection differs from the oracle's choice");
    }
  }

  void audit_rule(const LedgerEntry& e) {
    ++report_.derivations_checked;
    const auto& in = e.inputs;
    const std::string& r = e.rule;
    if (r == "left_fiber") {
      expect_strings(e, brute_left_fiber(strings(in.at(0)), store_.string(in.at(1)), limits_));
    } else if (r == "right_fiber") {
      expect_strings(e, brute_fiber(strings(in.at(0)), store_.string(in.at(1)), limits_));
    } else if (r == "append_suffix") {
      std::vector<AString> out;
      for (const auto& x : members(in.at(0))) out.push_back(join(x, store_.string(in.at(1))));
      expect_strings(e, std::move(out));
    } else if (r == "restrict_right") {
      const StringSet& tails = strings(in.at(1));
      const std::size_t head = strings(in.at(0)).length() - tails.length();
      std::vector<AString> out;
      for (const auto& s : members(in.at(0))) {
        if (tails.contains(slice(s, head, tails.length()))) out.push_back(s);
      }
      expect_strings(e, std::move(out));
    } else if (r == "dense_prefix") {
      const std::uint64_t theta = std::stoull(detail(e, "theta"));
      const StringSet& s = strings(in.at(0));
      const std::size_t half = s.length() / 2;
      std::map<AString, std::uint64_t> counts;
      for (const auto& str : members(in.at(0))) ++counts[slice(str, 0, half)];
      std::vector<AString> out;
      for (const auto& h : all_strings(s.ambient(), static_cast<int>(half), limits_)) {
        if (counts[h] >= theta) out.push_back(h);
      }
      expect_strings(e, std::move(out));
    } else if (r == "common_suffix") {
      const StringSet& s = strings(in.at(1));
      const AString& z = store_.string(in.at(2));
      std::vector<AString> out;
      for (const auto& h : members(in.at(0))) {
        if (s.contains(join(h, z))) out.push_back(h);
      }
      expect_strings(e, std::move(out));
    } else if (r == "popular_sum") {
      const auto& hp = members(in.at(0));
      const GroupSpec& spec = strings(in.at(0)).ambient().spec();
      std::map<std::int64_t, std::uint64_t> classes;
      for (const auto& h : hp) ++classes[brute_string_sum(spec, h).value];
      const std::uint64_t self = detail(e, "counting") == "others-only" ? 1 : 0;
      std::vector<AString> out;
      for (const auto& h : hp) {
        const std::uint64_t sharing = classes[brute_string_sum(spec, h).value] - self;
        // sharing >= |H'| / (2 |Sigma(H')|)
        if (BigInt(sharing) * 2 * classes.size() >= BigInt(hp.size())) out.push_back(h);
      }
      expect_strings(e, std::move(out));
    } else if (r == "sigma") {
      expect_elems(e, sigma_of(in.at(0)));
    } else if (r == "truncate") {
      const std::size_t count = std::stoull(detail(e, "count"));
      const ElemSet& x = elems(in.at(0));
      std::vector<GroupElem> head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(count));
      expect_elems(e, ElemSet(x.spec(), head));
    } else if (r == "subset") {
      const ElemSet& out = elems(e.output);
      const ElemSet& x = elems(in.at(0));
      for (GroupElem v : out) {
        if (!x.contains(v)) issue(e.index, "subset: output escapes its source");
      }
    } else if (r == "sum_in") {
      const ElemSet& sig = elems(in.at(1));
      const GroupSpec& spec = sig.spec();
      std::vector<AString> out;
      for (const auto& h : members(in.at(0))) {
        if (sig.contains(brute_string_sum(spec, h))) out.push_back(h);
      }
      expect_strings(e, std::move(out));
    } else if (r == "suffix_heads") {
      const StringSet& h3 = strings(in.at(0));
      const AString& w = store_.string(in.at(1));
      std::vector<GroupElem> out;
      for (GroupElem a : h3.ambient()) {
        if (h3.contains(join(AString{{a}}, w))) out.push_back(a);
      }
      expect_elems(e, ElemSet(h3.ambient().spec(), out));
    } else if (r == "max_left_fiber_suffix") {
      const StringSet& s = strings(in.at(0));
      const int tail = static_cast<int>(store_.string(e.output).length());
      std::map<AString, std::uint64_t> counts;
      for (const auto& str : members(in.at(0))) {
        ++counts[slice(str, s.length() - tail, tail)];
      }
      expect_choice(e, least_argmax(all_strings(s.ambient(), tail, limits_),
                                    [&](const AString& y) { return counts[y]; }));
    } else if (r == "max_fiber_overlap") {
      const StringSet& s = strings(in.at(0));
      const std::size_t half = s.length() / 2;
      std::map<AString, std::uint64_t> left;  // |L_z|
      for (const auto& str : members(in.at(0))) ++left[slice(str, half, half)];
      expect_choice(e, least_argmax(all_strings(s.ambient(), static_cast<int>(half), limits_),
                                    [&](const AString& x) {
                                      std::uint64_t total = 0;
                                      for (const auto& z : brute_fiber(s, x, limits_)) {
                                        total += left[z];
                                      }
                                      return total;
                                    }));
    } else if (r == "least_descent_prefix") {
      const StringSet& s = strings(in.at(0));
      const std::uint64_t theta = std::stoull(detail(e, "theta"));
      const BigInt limit(detail(e, "sigma_limit"));
      const GroupSpec& spec = s.ambient().spec();
      std::optional<AString> expected;
      for (const auto& y : all_strings(s.ambient(), s.length() / 2, limits_)) {
        const auto fiber = brute_fiber(s, y, limits_);
        if (fiber.size() < theta) continue;
        std::set<std::int64_t> sums;
        for (const auto& z : fiber) sums.insert(brute_string_sum(spec, z).value);
        if (BigInt(sums.size()) <= limit) {
          expected = y;
          break;
        }
      }
      expect_choice(e, expected);
    } else if (r == "max_common_suffix") {
      const StringSet& s = strings(in.at(1));
      const auto& hs = members(in.at(0));
      expect_choice(e, least_argmax(members(in.at(2)), [&](const AString& z) {
                      std::uint64_t total = 0;
                      for (const auto& h : hs) total += s.contains(join(h, z));
                      return total;
                    }));
    } else if (r == "max_suffix_heads") {
      const StringSet& h3 = strings(in.at(0));
      expect_choice(e, least_argmax(all_strings(h3.ambient(), h3.length() - 1, limits_),
                                    [&](const AString& w) {
                                      std::uint64_t total = 0;
                                      for (GroupElem a : h3.ambient()) {
                                        total += h3.contains(join(AString{{a}}, w));
                                      }
                                      return total;
                                    }));
    } else {
      issue(e.index, "unknown rule " + r);
    }
  }

  void audit_reassignment(const LedgerEntry& e) {
    if (e.inputs.empty() || e.output.empty()) {
      issue(e.index, "reassignment without operands");
      return;
    }
    if (sigma_of(e.output).size() > sigma_of(e.inputs.front()).size()) {
      issue(e.index, "|Sigma(S)| grew across a reassignment");
    }
  }

  const SetStore& store_;
  const OracleLimits& limits_;
  AuditReport report_;
  std::map<std::string, std::vector<AString>> members_;
  std::map<std::string, ElemSet> sigma_;
};

}  // namespace

AuditReport audit_ledger(const CertificateLedger& ledger, const SetStore& store,
                         const OracleLimits& limits) {
  return Auditor(store, limits).run(ledger);
}

}  // namespace hbsg::oracle
