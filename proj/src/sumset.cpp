#include "hbsg/sumset.hpp"

#include "hbsg/errors.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace hbsg {

namespace {

enum class Op { add, subtract };

// Dense index space for the results of one binary operation.
struct DenseRange {
  std::int64_t base = 0;
  std::uint64_t size = 0;

  std::uint64_t index(GroupElem e) const { return static_cast<std::uint64_t>(e.value - base); }
  GroupElem element(std::uint64_t i) const { return GroupElem{base + static_cast<std::int64_t>(i)}; }
};

GroupElem apply(const GroupSpec& spec, Op op, GroupElem a, GroupElem b) {
  if (spec.kind() == GroupSpec::Kind::integer_window) {
    // Extremes were range-checked up front, so plain arithmetic is safe.
    return GroupElem{op == Op::add ? a.value + b.value : a.value - b.value};
  }
  return op == Op::add ? spec.add(a, b) : spec.subtract(a, b);
}

// For windows the result set is contained in [lo, hi] iff its extremes are,
// so checking the two extreme results detects every overflow.
DenseRange result_range(const ElemSet& x, const ElemSet& y, Op op) {
  const GroupSpec& spec = x.spec();
  if (auto order = spec.order()) return DenseRange{0, *order};
  GroupElem low = op == Op::add ? spec.add(x[0], y[0]) : spec.subtract(x[0], y[y.size() - 1]);
  GroupElem high = op == Op::add ? spec.add(x[x.size() - 1], y[y.size() - 1])
                                 : spec.subtract(x[x.size() - 1], y[0]);
  auto width = static_cast<unsigned __int128>(static_cast<__int128>(high.value) - low.value) + 1;
  std::uint64_t size = width > std::numeric_limits<std::uint64_t>::max()
                           ? std::numeric_limits<std::uint64_t>::max()
                           : static_cast<std::uint64_t>(width);
  return DenseRange{low.value, size};
}

bool use_dense(Kernel kernel, const DenseRange& range, std::size_t pairs) {
  if (kernel == Kernel::dense) {
    if (range.size > (std::uint64_t{1} << 34)) {
      throw BudgetExceeded("dense kernel range too large");
    }
    return true;
  }
  if (kernel == Kernel::sparse) return false;
  const std::uint64_t limit = std::max<std::uint64_t>(4096, 16 * static_cast<std::uint64_t>(pairs));
  return range.size <= limit;
}

ElemSet combine(const ElemSet& x, const ElemSet& y, Op op, Kernel kernel) {
  require_same_spec(x, y, op == Op::add ? "sumset" : "difference_set");
  const GroupSpec& spec = x.spec();
  if (x.empty() || y.empty()) return ElemSet(spec);
  DenseRange range = result_range(x, y, op);

  std::vector<GroupElem> out;
  if (use_dense(kernel, range, x.size() * y.size())) {
    std::vector<std::uint64_t> bits((range.size + 63) / 64, 0);
    for (GroupElem a : x) {
      for (GroupElem b : y) {
        std::uint64_t i = range.index(apply(spec, op, a, b));
        bits[i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
    for (std::size_t w = 0; w < bits.size(); ++w) {
      std::uint64_t word = bits[w];
      while (word != 0) {
        int bit = std::countr_zero(word);
        out.push_back(range.element(w * 64 + static_cast<std::uint64_t>(bit)));
        word &= word - 1;
      }
    }
  } else {
    out.reserve(x.size() * y.size());
    for (GroupElem a : x) {
      for (GroupElem b : y) out.push_back(apply(spec, op, a, b));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return make_sorted_set(spec, std::move(out));
}

}  // namespace

ElemSet sumset(const ElemSet& x, const ElemSet& y, Kernel kernel) {
  return combine(x, y, Op::add, kernel);
}

ElemSet difference_set(const ElemSet& x, const ElemSet& y, Kernel kernel) {
  return combine(x, y, Op::subtract, kernel);
}

ElemSet iterated_sumset(const ElemSet& x, int ell, Kernel kernel) {
  if (ell < 1) throw InvalidArgument("iterated_sumset needs ell >= 1");
  ElemSet acc = x;
  for (int i = 1; i < ell; ++i) acc = sumset(acc, x, kernel);
  return acc;
}

std::vector<std::pair<GroupElem, std::uint64_t>> sum_multiplicities(const ElemSet& x,
                                                                    const ElemSet& y,
                                                                    Kernel kernel) {
  require_same_spec(x, y, "sum_multiplicities");
  std::vector<std::pair<GroupElem, std::uint64_t>> out;
  if (x.empty() || y.empty()) return out;
  const GroupSpec& spec = x.spec();
  DenseRange range = result_range(x, y, Op::add);

  if (use_dense(kernel, range, x.size() * y.size())) {
    std::vector<std::uint64_t> counts(range.size, 0);
    for (GroupElem a : x) {
      for (GroupElem b : y) ++counts[range.index(apply(spec, Op::add, a, b))];
    }
    for (std::uint64_t i = 0; i < range.size; ++i) {
      if (counts[i] != 0) out.emplace_back(range.element(i), counts[i]);
    }
  } else {
    std::vector<GroupElem> sums;
    sums.reserve(x.size() * y.size());
    for (GroupElem a : x) {
      for (GroupElem b : y) sums.push_back(apply(spec, Op::add, a, b));
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 0; i < sums.size();) {
      std::size_t j = i;
      while (j < sums.size() && sums[j] == sums[i]) ++j;
      out.emplace_back(sums[i], static_cast<std::uint64_t>(j - i));
      i = j;
    }
  }
  return out;
}

std::uint64_t additive_energy(const ElemSet& x, const ElemSet& y, Kernel kernel) {
  std::uint64_t energy = 0;
  for (const auto& [sum, r] : sum_multiplicities(x, y, kernel)) energy += r * r;
  return energy;
}

Rational doubling_constant(const ElemSet& x) {
  if (x.empty()) throw InvalidArgument("doubling constant of an empty set");
  return Rational(sumset(x, x).size(), x.size());
}

bool PlunneckeReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const PlunneckeRow& r) { return r.pass; });
}

PlunneckeReport plunnecke_check(const ElemSet& x, int ell_max) {
  if (x.empty()) throw InvalidArgument("plunnecke_check needs a nonempty set");
  if (ell_max < 2) throw InvalidArgument("plunnecke_check needs ell_max >= 2");
  PlunneckeReport report;
  report.base_size = x.size();
  ElemSet acc = x;
  ElemSet doubled = sumset(x, x);
  report.doubling = Rational(doubled.size(), x.size());
  Rational power = 1;
  for (int ell = 1; ell <= ell_max; ++ell) {
    if (ell == 2) {
      acc = doubled;
    } else if (ell > 2) {
      acc = sumset(acc, x);
    }
    power *= report.doubling;
    Rational bound = power * x.size();
    report.rows.push_back({ell, acc.size(), bound, Rational(acc.size()) <= bound});
  }
  return report;
}

RuzsaReport ruzsa_triangle_check(const ElemSet& x, const ElemSet& y, const ElemSet& z) {
  require_same_spec(x, y, "ruzsa_triangle_check");
  require_same_spec(y, z, "ruzsa_triangle_check");
  if (y.empty()) throw InvalidArgument("ruzsa_triangle_check needs a nonempty middle set");
  RuzsaReport report;
  report.lhs = difference_set(x, z).size() * y.size();
  report.rhs = difference_set(x, y).size() * difference_set(y, z).size();
  report.pass = report.lhs <= report.rhs;
  return report;
}

}  // namespace hbsg
