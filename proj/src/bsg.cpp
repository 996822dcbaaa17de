#include "hbsg/bsg.hpp"

#include "hbsg/errors.hpp"
#include "hbsg/sumset.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <string>

namespace hbsg {

namespace {

void require_equal_sizes(const ElemSet& x, const ElemSet& y) {
  require_same_spec(x, y, "bsg");
  if (x.empty() || x.size() != y.size()) {
    throw InvalidArgument("bsg needs |X| == |Y| >= 1, got " + std::to_string(x.size()) + " and " +
                          std::to_string(y.size()));
  }
}

// Least integer m with m * den >= num, for num, den > 0.
std::uint64_t ceil_ratio(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(q);
}

// Least integer count m with m >= fraction * E / n^2.
std::uint64_t count_threshold(const Rational& fraction, std::uint64_t energy, std::size_t n) {
  BigInt num = numerator(fraction) * BigInt(energy);
  BigInt den = denominator(fraction) * BigInt(n) * BigInt(n);
  return ceil_ratio(num, den);
}

struct Bounds {
  Certificate size;
  Certificate doubling;
};

Bounds certify_bounds(std::size_t candidate, std::uint64_t doubled, std::uint64_t energy,
                      std::size_t n, const Rational& kappa) {
  const Measure e_measure{MeasureKind::energy, {"X", "Y"}};
  const Measure n_measure{MeasureKind::size, {"X"}};
  Bounds b;
  b.size = certify(
      "bsg.size", "|X'| >= C^kappa n",
      factor("|X'|", candidate, {MeasureKind::size, {"X'"}}), Relation::ge,
      Expression(factor("E(X,Y)", energy, e_measure, kappa))
          .times(factor("n", n, n_measure, 1 - 3 * kappa)));
  b.doubling = certify(
      "bsg.doubling", "|X' + X'| <= C^(-kappa) n",
      factor("|X'+X'|", doubled, {MeasureKind::sumset_size, {"X'", "X'"}}), Relation::le,
      Expression(factor("E(X,Y)", energy, e_measure, -kappa))
          .times(factor("n", n, n_measure, 1 + 3 * kappa)));
  return b;
}

using Bits = std::vector<std::uint64_t>;

std::size_t common_count(const Bits& a, const Bits& b) {
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += std::popcount(a[w] & b[w]);
  return total;
}

}  // namespace

Rational energy_density(const ElemSet& x, const ElemSet& y) {
  require_equal_sizes(x, y);
  const BigInt n = x.size();
  return Rational(BigInt(additive_energy(x, y)), n * n * n);
}

BsgResult bsg_extract(const ElemSet& x, const ElemSet& y, const BsgConfig& cfg) {
  require_equal_sizes(x, y);
  if (cfg.kappa <= 0) throw InvalidArgument("bsg kappa must be positive");
  if (cfg.schedule_steps < 1) throw InvalidArgument("bsg schedule needs at least one step");

  const GroupSpec& spec = x.spec();
  const std::size_t n = x.size();
  BsgResult out{x, n, additive_energy(x, y), 0, 0, {}, {}, "none", 0};
  out.density = Rational(BigInt(out.energy), BigInt(n) * n * n);

  auto finish = [&](const ElemSet& chosen, std::string source) {
    out.x_prime = chosen;
    out.doubled_size = sumset(chosen, chosen).size();
    auto b = certify_bounds(chosen.size(), out.doubled_size, out.energy, n, cfg.kappa);
    out.size_cert = std::move(b.size);
    out.doubling_cert = std::move(b.doubling);
    out.source = std::move(source);
    return out;
  };

  {
    auto full = certify_bounds(n, sumset(x, x).size(), out.energy, n, cfg.kappa);
    if (full.size.pass && full.doubling.pass) return finish(x, "full-set");
  }

  // Popular-sum graph: edge (i, j) when r(x_i + y_j) is large.
  std::map<GroupElem, std::uint64_t> r;
  for (const auto& [s, count] : sum_multiplicities(x, y)) r.emplace(s, count);
  const std::uint64_t popular_at = count_threshold(cfg.popularity_fraction, out.energy, n);
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> adj(n, Bits(words, 0));     // X side, bits over Y
  std::vector<Bits> adj_y(n, Bits(words, 0));   // Y side, bits over X
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (r.at(spec.add(x[i], y[j])) >= popular_at) {
        adj[i][j / 64] |= std::uint64_t{1} << (j % 64);
        adj_y[j][i / 64] |= std::uint64_t{1} << (i % 64);
        ++degree[i];
      }
    }
  }
  const std::uint64_t degree_at = count_threshold(cfg.degree_fraction, out.energy, n);

  // Codegrees between kept vertices.
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] >= degree_at) kept.push_back(i);
  }
  std::vector<std::vector<std::size_t>> codegree(n, std::vector<std::size_t>(n, 0));
  for (std::size_t a : kept) {
    for (std::size_t b : kept) codegree[a][b] = common_count(adj[a], adj[b]);
  }

  const BigInt e2 = BigInt(out.energy) * BigInt(out.energy);
  const BigInt n5 = BigInt(n) * n * n * n * n;

  std::optional<ElemSet> best_any;
  std::optional<ElemSet> best_sized;
  std::string best_any_source;
  std::string best_sized_source;

  for (int step = 1; step <= cfg.schedule_steps; ++step) {
    // cod >= C^2 n / 2^step  <=>  cod >= ceil(E^2 / (n^5 2^step)).
    const std::uint64_t tau = ceil_ratio(e2, n5 * (BigInt(1) << step));
    std::optional<ElemSet> level_best;
    std::string level_source;
    for (std::size_t pivot = 0; pivot < n; ++pivot) {
      if (out.candidates_scanned >= cfg.max_candidates) break;
      ++out.candidates_scanned;
      std::vector<std::size_t> around;
      for (std::size_t i : kept) {
        if (adj_y[pivot][i / 64] >> (i % 64) & 1) around.push_back(i);
      }
      if (around.empty()) continue;
      std::vector<GroupElem> chosen;
      for (std::size_t a : around) {
        std::size_t linked = 0;
        for (std::size_t b : around) linked += codegree[a][b] >= tau;
        if (Rational(linked) >= cfg.pair_fraction * around.size()) chosen.push_back(x[a]);
      }
      if (chosen.empty()) continue;
      if (!level_best || chosen.size() > level_best->size()) {
        level_best = make_sorted_set(spec, std::move(chosen));
        level_source = "threshold j=" + std::to_string(step) + " pivot=" + std::to_string(pivot);
      }
    }
    if (!level_best) continue;
    auto b = certify_bounds(level_best->size(), sumset(*level_best, *level_best).size(),
                            out.energy, n, cfg.kappa);
    if (b.size.pass && b.doubling.pass) return finish(*level_best, level_source);
    if (b.size.pass && (!best_sized || level_best->size() > best_sized->size())) {
      best_sized = level_best;
      best_sized_source = level_source;
    }
    if (!best_any || level_best->size() > best_any->size()) {
      best_any = level_best;
      best_any_source = level_source;
    }
  }
  if (best_sized) return finish(*best_sized, best_sized_source);
  if (best_any) return finish(*best_any, best_any_source);
  return finish(ElemSet(spec), "none");
}

}  // namespace hbsg
