// Runs the eight acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.
#include "hbsg/bsg.hpp"
#include "hbsg/errors.hpp"
#include "hbsg/harness.hpp"
#include "hbsg/oracle.hpp"
#include "hbsg/selection.hpp"
#include "hbsg/sumset.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

using namespace hbsg;
using namespace hbsg::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_++ < 3) first_failures_ += (first_failures_.empty() ? "" : "; ") + what;
  }
  std::uint64_t checks() const { return checks_; }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary << ", " << checks_ << " checks";
    if (failures_) out << ", " << failures_ << " failed (" << first_failures_ << ")";
    return {failures_ == 0, out.str()};
  }

 private:
  std::uint64_t checks_ = 0;
  std::uint64_t failures_ = 0;
  std::string first_failures_;
};

Json load_config(const std::string& name) {
  std::ifstream f(std::string(HBSG_SOURCE_DIR) + "/configs/" + name);
  if (!f) throw Error("missing config " + name);
  return Json::parse(f);
}

// 1. fast operations against the brute-force oracles
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  Tally t;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    const GroupSpec g = random_group(rng);
    const ElemSet x = random_set(rng, g, 0, 12);
    const ElemSet y = random_set(rng, g, 0, 12);
    const std::string tag = "instance " + std::to_string(i);
    t.check(sumset(x, y) == oracle::brute_sumset(x, y), tag + " sumset");
    t.check(difference_set(x, y) == oracle::brute_difference(x, y), tag + " difference");
    for (int ell = 1; ell <= 4; ++ell) {
      t.check(iterated_sumset(x, ell) == oracle::brute_iterated(x, ell), tag + " iterated");
    }
    t.check(additive_energy(x, y) == oracle::brute_energy(x, y), tag + " energy");

    if (!x.empty() && !y.empty()) {
      std::vector<BipartiteGraph::Edge> edges;
      for (std::size_t u = 0; u < x.size(); ++u)
        for (std::size_t v = 0; v < y.size(); ++v)
          if (harness::uniform_below(rng, 3) == 0) edges.emplace_back(u, v);
      const BipartiteGraph graph(x.size(), y.size(), edges);
      t.check(graph_restricted_sumset(x, y, graph) == oracle::brute_graph_sumset(x, y, graph),
              tag + " graph sumset");
    }

    const ElemSet a = random_set(rng, g, 1, 8);
    const int k = 1 + static_cast<int>(harness::uniform_below(rng, 4));
    StringSet s = random_strings(rng, a, k, 1 + harness::uniform_below(rng, 4), 4);
    if (i % 2) s = s.as_complement();
    t.check(sigma(s) == oracle::brute_sigma(s), tag + " sigma");
    if (k >= 2) {
      const int j = 1 + static_cast<int>(harness::uniform_below(rng, k - 1));
      const auto prefixes = oracle::all_strings(a, j);
      const auto& x0 = prefixes[harness::uniform_below(rng, prefixes.size())];
      t.check(right_fiber(s, x0).strings() == oracle::brute_fiber(s, x0), tag + " right fiber");
      const auto suffixes = oracle::all_strings(a, k - j);
      const auto& y0 = suffixes[harness::uniform_below(rng, suffixes.size())];
      t.check(left_fiber(s, y0).strings() == oracle::brute_left_fiber(s, y0), tag + " left fiber");
    }
  }
  return t.outcome(std::to_string(instances) + " instances");
}

// 2. Plunnecke exhaustively on small subsets of {0..29}, Ruzsa on random triples
Outcome verifier_suites() {
  Tally t;
  std::uint64_t subsets = 0;
  std::vector<std::int64_t> chosen;
  const GroupSpec g = window();
  std::function<void(std::int64_t)> walk = [&](std::int64_t next) {
    if (!chosen.empty()) {
      ++subsets;
      const auto report = plunnecke_check(ElemSet::from_values(g, chosen), 4);
      t.check(report.all_pass(), "plunnecke");
    }
    if (chosen.size() == 7) return;
    for (std::int64_t v = next; v < 30; ++v) {
      chosen.push_back(v);
      walk(v + 1);
      chosen.pop_back();
    }
  };
  walk(0);

  std::mt19937_64 rng(2002);
  for (int i = 0; i < 1000; ++i) {
    const GroupSpec h = random_group(rng);
    const auto r = ruzsa_triangle_check(random_set(rng, h, 1, 10), random_set(rng, h, 1, 10),
                                        random_set(rng, h, 1, 10));
    t.check(r.pass && r.lhs <= r.rhs, "ruzsa triple " + std::to_string(i));
  }
  return t.outcome(std::to_string(subsets) + " subsets, 1000 triples");
}

// 3. popular-intersector certificate on families meeting the precondition
Outcome intersector_property() {
  std::mt19937_64 rng(3003);
  const Rational deltas[] = {Rational(1, 20), Rational(1, 10), Rational(1, 5)};
  Tally t;
  int accepted = 0;
  std::uint64_t drawn = 0;
  while (accepted < 500) {
    ++drawn;
    const std::size_t n = 1 + harness::uniform_below(rng, 64);
    const std::size_t r = 1 + harness::uniform_below(rng, 32);
    const Rational& delta = deltas[harness::uniform_below(rng, 3)];
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < r; ++i) {
      // dense members so the precondition usually holds
      const auto size = n - harness::uniform_below(rng, n / 2 + 1);
      auto picked = harness::sample_distinct(rng, n, std::max<std::size_t>(size, 1));
      members.emplace_back(picked.begin(), picked.end());
    }
    const FamilyOfSubsets family(n, members);
    // precondition decided independently of the selector
    Expression rhs = Expression(factor("r", r)).times(factor("n", n, {}, 1 - delta));
    const bool pre = oracle::holds(
        oracle::compare_expressions(Expression(factor("sum", family.total_size())), rhs),
        Relation::ge);
    if (!pre) continue;
    ++accepted;
    const auto cert = select_popular_intersector(family, delta);
    t.check(cert.precondition_holds(), "precondition flag");
    t.check(cert.pass(), "family " + std::to_string(accepted));
  }
  return t.outcome("500 families (" + std::to_string(drawn) + " drawn)");
}

// 4. fiber identities and the popular-sum regime on deletion instances
Outcome stage_identities() {
  std::mt19937_64 rng(4004);
  Tally t;
  std::uint64_t regime = 0, flagged = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = i % 2 ? 8 : 4;
    const std::size_t max_a = k == 8 ? 4 : 12;
    const ElemSet a = random_set(rng, window(), 2, max_a, 30);
    const StringSet s = random_strings(rng, a, k, 7 + harness::uniform_below(rng, 3), 10);
    const std::string tag = "instance " + std::to_string(i);

    const auto halves = oracle::all_strings(a, k / 2);
    std::uint64_t fiber_total = 0;
    std::vector<std::vector<AString>> fibers;
    for (const auto& x : halves) {
      fiber_total += right_fiber(s, x).size();
      fibers.push_back(oracle::brute_fiber(s, x));
    }
    t.check(fiber_total == s.size(), tag + " fiber partition");

    for (int probe = 0; probe < 6; ++probe) {
      const std::size_t xi = harness::uniform_below(rng, halves.size());
      std::uint64_t overlap = 0;
      for (const auto& ry : fibers) {
        std::vector<AString> both;
        std::set_intersection(fibers[xi].begin(), fibers[xi].end(), ry.begin(), ry.end(),
                              std::back_inserter(both));
        overlap += both.size();
      }
      const StringSet rx = right_fiber(s, halves[xi]);
      t.check(restrict_by_right(s, rx).size() == overlap, tag + " restrict size");

      // a fiber is a natural H' candidate: apply the popular-sum filter to it
      if (rx.empty()) continue;
      const auto r = popular_sum_filter(rx);
      std::map<GroupElem, std::uint64_t> classes;
      for (const auto& h : fibers[xi]) ++classes[oracle::brute_string_sum(a.spec(), h)];
      const std::uint64_t self = r.counting == SumCounting::others_only ? 1 : 0;
      std::uint64_t kept = 0;
      for (const auto& [sum, count] : classes) {
        // kept when the strings sharing its sum reach |H'| / (2 |Sigma(H')|)
        if (Rational(count - self) * 2 * classes.size() >= fibers[xi].size()) kept += count;
      }
      const bool holds = 2 * kept >= fibers[xi].size();
      t.check(r.popular.size() == kept, tag + " popular count");
      t.check(r.cert.pass == holds, tag + " flag");
      if (2 * classes.size() <= fibers[xi].size()) {
        ++regime;
        t.check(r.cert.pass, tag + " small-sigma regime");
      } else if (!r.cert.pass) {
        ++flagged;
      }
    }
  }
  return t.outcome("100 instances, " + std::to_string(regime) + " in the small-sigma regime, " +
                   std::to_string(flagged) + " flagged outside it");
}

// A' + A' + 2 Sigma(w) inside Sigma + Sigma, by brute force
bool containment_holds(const PipelineResult& r) {
  const GroupSpec& g = r.ambient.spec();
  const ElemSet target = oracle::brute_sumset(r.sigma_set, r.sigma_set);
  GroupElem shift{0};
  if (!r.w.coords.empty()) {
    const GroupElem sw = oracle::brute_string_sum(g, r.w);
    shift = oracle::add(g, sw, sw);
  }
  for (auto a1 : r.a_prime)
    for (auto a2 : r.a_prime)
      if (!target.contains(oracle::add(g, oracle::add(g, a1, a2), shift))) return false;
  return true;
}

// 5. containment on every non-halt run of the sweep
Outcome final_containment(std::vector<harness::InstanceReport>& sweep) {
  Tally t;
  int non_halt = 0;
  for (const auto& spec : harness::expand_config(load_config("sweep.json"))) {
    const auto inst = harness::generate_instance(spec);
    const auto r = run_pipeline(inst.ambient, inst.strings, inst.params);
    if (r.status == RunStatus::diagnostic_halt) continue;
    ++non_halt;
    t.check(r.containment && r.containment->pass, inst.id + " recorded");
    t.check(containment_holds(r), inst.id + " brute force");
  }
  for (auto& spec : harness::expand_config(load_config("sweep.json"))) {
    sweep.push_back(harness::run_instance(spec, true));
  }
  return t.outcome(std::to_string(non_halt) + " non-halt runs");
}

bool size_bound_holds(const BsgResult& r, const Rational& kappa) {
  const BigInt n = r.n;
  Expression rhs = Expression(factor("E", r.energy, {}, kappa)).times(factor("n", n, {}, 1 - 3 * kappa));
  return oracle::holds(
      oracle::compare_expressions(Expression(factor("|X'|", r.x_prime.size())), rhs), Relation::ge);
}

bool doubling_bound_holds(const BsgResult& r, std::uint64_t doubled, const Rational& kappa) {
  const BigInt n = r.n;
  Expression rhs = Expression(factor("E", r.energy, {}, -kappa)).times(factor("n", n, {}, 1 + 3 * kappa));
  return oracle::holds(oracle::compare_expressions(Expression(factor("|X'+X'|", doubled)), rhs),
                       Relation::le);
}

// 6. extractor on progressions and on progression-plus-noise sets
Outcome bsg_sanity() {
  Tally t;
  const BsgConfig cfg;
  for (int n : {8, 16, 32}) {
    const ElemSet ap = interval(0, n);
    const auto r = bsg_extract(ap, ap, cfg);
    const std::uint64_t doubled = oracle::brute_sumset(r.x_prime, r.x_prime).size();
    const std::string tag = "AP(" + std::to_string(n) + ")";
    t.check(r.energy == oracle::brute_energy(ap, ap), tag + " energy");
    t.check(size_bound_holds(r, cfg.kappa), tag + " size bound");
    t.check(doubling_bound_holds(r, doubled, cfg.kappa), tag + " doubling bound");
  }
  int passing = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> raw;
    for (int i = 0; i < 16; ++i) raw.push_back(i);
    std::set<std::int64_t> taken(raw.begin(), raw.end());
    while (raw.size() < 32) {
      const auto v = static_cast<std::int64_t>(harness::uniform_below(rng, 1000000));
      if (taken.insert(v).second) raw.push_back(v);
    }
    const ElemSet x = ElemSet::from_values(window(), raw);
    const auto r = bsg_extract(x, x, cfg);
    const std::uint64_t doubled = oracle::brute_sumset(r.x_prime, r.x_prime).size();
    const std::string tag = "seed " + std::to_string(seed);
    t.check(r.x_prime.is_subset_of(x), tag + " subset");
    t.check(r.energy == oracle::brute_energy(x, x), tag + " energy");
    t.check(r.doubled_size == doubled, tag + " doubled size");
    t.check(r.size_cert.pass == size_bound_holds(r, cfg.kappa), tag + " size flag");
    t.check(r.doubling_cert.pass == doubling_bound_holds(r, doubled, cfg.kappa), tag + " doubling flag");
    passing += r.pass();
  }
  return t.outcome("3 progressions, 10 noisy sets (" + std::to_string(passing) + " meet both bounds)");
}

// 7. the demo instance: non-halt, audited, replayed byte for byte
Outcome demo_replay() {
  Tally t;
  const auto specs = harness::expand_config(load_config("demo.json"));
  const auto inst = harness::generate_instance(specs.at(0));
  const auto first = run_pipeline(inst.ambient, inst.strings, inst.params);
  const auto second = run_pipeline(inst.ambient, inst.strings, inst.params);
  t.check(first.status != RunStatus::diagnostic_halt, "status " + std::string(to_string(first.status)));
  t.check(to_json(first.ledger).dump() == to_json(second.ledger).dump(), "ledger replay");
  const auto regenerated = harness::generate_instance(inst.echo);
  t.check(regenerated.strings == inst.strings, "echo regenerates S");
  const auto audit = oracle::audit_ledger(first.ledger, first.store);
  for (const auto& issue : audit.issues) {
    t.check(false, "entry " + std::to_string(issue.entry) + ": " + issue.what);
  }
  t.check(audit.entries == first.ledger.size(), "every entry audited");
  std::ostringstream s;
  s << to_string(first.status) << ", " << audit.entries << " ledger entries, "
    << audit.factors_checked << " factors, " << audit.derivations_checked << " derivations";
  return t.outcome(s.str());
}

// 8. growth table against brute-force sums and independent bound evaluation
Outcome growth_honesty(const std::vector<harness::InstanceReport>& sweep) {
  Tally t;
  int rows = 0, gaps = 0;
  for (const auto& r : sweep) {
    if (!r.report.contains("result")) continue;
    const Json& result = r.report["result"];
    const ElemSet a_prime = elem_set_from_json(result["a_prime"]);
    const Json& params = r.report["instance"]["params"];
    const Rational c = rational_from_json(params["c"]);
    const Rational eps = rational_from_json(params["epsilon"]);
    const std::size_t a_size = r.report["summary"]["A_size"].get<std::size_t>();
    for (const auto& row : result["growth"]) {
      ++rows;
      const int ell = row["ell"].get<int>();
      const std::string tag = r.id + " ell=" + std::to_string(ell);
      const std::uint64_t brute = oracle::brute_iterated(a_prime, ell).size();
      t.check(row["size"].get<std::uint64_t>() == brute, tag + " size");
      const Expression rhs(factor("|A'|", a_prime.size(), {}, c * (1 + eps * ell)));
      const bool expected =
          oracle::holds(oracle::compare_expressions(Expression(factor("n", brute)), rhs), Relation::le);
      t.check(row["pass"].get<bool>() == expected, tag + " pass flag");
      if (a_size <= 12 && !a_prime.empty()) {
        bool found = false;
        for (const auto& g : r.report["oracle"]["growth"]) {
          if (g["ell"].get<int>() == ell && g.contains("gap")) found = true;
        }
        t.check(found, tag + " gap reported");
        gaps += found;
      }
    }
  }
  return t.outcome(std::to_string(rows) + " growth rows, " + std::to_string(gaps) + " with gaps");
}

}  // namespace

int main() {
  int failed = 0;
  std::vector<harness::InstanceReport> sweep;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"Plunnecke and Ruzsa", verifier_suites},
      {"popular intersector", intersector_property},
      {"stage identities", stage_identities},
      {"final-leg containment", [&] { return final_containment(sweep); }},
      {"BSG sanity", bsg_sanity},
      {"demo replay and audit", demo_replay},
      {"growth-table honesty", [&] { return growth_honesty(sweep); }},
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu %-24s %s  (%s; %.2fs)\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed;
}
