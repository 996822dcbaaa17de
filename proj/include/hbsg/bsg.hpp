#pragma once

#include "hbsg/certificate.hpp"
#include "hbsg/exact.hpp"
#include "hbsg/group.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace hbsg {

/// Knobs of the popularity-graph extraction. Fractions are exact.
struct BsgConfig {
  Rational kappa{20};
  /// A sum s is popular when r(s) >= popularity_fraction * C n.
  Rational popularity_fraction{1, 2};
  /// Vertices of X kept before pivoting need degree >= degree_fraction * C n.
  Rational degree_fraction{1, 4};
  /// x survives when it has codegree >= tau with this fraction of X_y.
  Rational pair_fraction{1, 2};
  /// tau_j = C^2 n / 2^j for j = 1..schedule_steps, strictest first.
  int schedule_steps = 8;
  /// Cap on (threshold, pivot) pairs examined.
  std::size_t max_candidates = 4096;
};

struct BsgResult {
  ElemSet x_prime;
  std::size_t n = 0;
  std::uint64_t energy = 0;
  Rational density;  // C = E / n^3
  std::uint64_t doubled_size = 0;  // |X' + X'|
  /// |X'| >= C^kappa n, written as E^kappa n^(1 - 3 kappa). Operands "X'", "X", "Y".
  Certificate size_cert;
  /// |X' + X'| <= C^(-kappa) n, written as E^(-kappa) n^(1 + 3 kappa).
  Certificate doubling_cert;
  /// "full-set", "threshold j=<j> pivot=<i>", or "none".
  std::string source;
  std::size_t candidates_scanned = 0;

  bool pass() const { return size_cert.pass && doubling_cert.pass; }
};

/// E(X, Y) / n^3. Throws InvalidArgument unless |X| == |Y| >= 1.
Rational energy_density(const ElemSet& x, const ElemSet& y);

/// Returns X itself when it already meets both bounds. Otherwise builds the
/// popular-sum graph on X x Y and, for each threshold tau_j and pivot y,
/// takes X' = {x in N(y) cap X0 : x has codegree >= tau_j with at least
/// pair_fraction of N(y) cap X0}. Each threshold keeps its largest candidate
/// (least pivot on ties); the first one meeting both bounds is returned, else
/// the largest meeting the size bound, else the largest overall.
BsgResult bsg_extract(const ElemSet& x, const ElemSet& y, const BsgConfig& cfg = {});

}  // namespace hbsg
