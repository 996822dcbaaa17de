#pragma once

#include "hbsg/exact.hpp"
#include "hbsg/group.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hbsg {

/// Kernel used to deduplicate sums. `dense` marks a bitmap over the range of
/// possible results, `sparse` sorts an explicit list. Both give identical
/// results; `automatic` picks by range density.
enum class Kernel { automatic, dense, sparse };

ElemSet sumset(const ElemSet& x, const ElemSet& y, Kernel kernel = Kernel::automatic);
ElemSet difference_set(const ElemSet& x, const ElemSet& y, Kernel kernel = Kernel::automatic);
/// ell-fold sumset X + ... + X. ell >= 1.
ElemSet iterated_sumset(const ElemSet& x, int ell, Kernel kernel = Kernel::automatic);

/// r(s) = |{(x, y) : x + y = s}| for every attained s, in canonical order.
std::vector<std::pair<GroupElem, std::uint64_t>> sum_multiplicities(
    const ElemSet& x, const ElemSet& y, Kernel kernel = Kernel::automatic);

/// Number of (x1, y1, x2, y2) with x1 + y1 = x2 + y2, computed as sum r(s)^2.
std::uint64_t additive_energy(const ElemSet& x, const ElemSet& y,
                              Kernel kernel = Kernel::automatic);

/// |X + X| / |X|, exact.
Rational doubling_constant(const ElemSet& x);

struct PlunneckeRow {
  int ell = 0;
  std::size_t size = 0;  // |ell X|
  Rational bound;        // C^ell |X|
  bool pass = false;
};

struct PlunneckeReport {
  Rational doubling;
  std::size_t base_size = 0;
  std::vector<PlunneckeRow> rows;  // ell = 1 .. ell_max

  bool all_pass() const;
};

/// Measures |ell X| against C^ell |X| for every ell <= ell_max.
PlunneckeReport plunnecke_check(const ElemSet& x, int ell_max);

struct RuzsaReport {
  std::uint64_t lhs = 0;  // |X - Z| |Y|
  std::uint64_t rhs = 0;  // |X - Y| |Y - Z|
  bool pass = false;
};

RuzsaReport ruzsa_triangle_check(const ElemSet& x, const ElemSet& y, const ElemSet& z);

}  // namespace hbsg
