#pragma once

#include "hbsg/certificate.hpp"
#include "hbsg/exact.hpp"
#include "hbsg/group.hpp"
#include "hbsg/strings.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hbsg {

/// Subsets U_1, ..., U_r of a universe V = {0, ..., n-1}.
class FamilyOfSubsets {
 public:
  /// Members are sorted and deduplicated; indices must be < universe_size.
  FamilyOfSubsets(std::size_t universe_size, std::vector<std::vector<std::size_t>> members);

  std::size_t universe_size() const { return universe_size_; }
  std::size_t count() const { return members_.size(); }
  const std::vector<std::size_t>& member(std::size_t i) const { return members_[i]; }
  std::uint64_t total_size() const;

 private:
  std::size_t universe_size_;
  std::vector<std::vector<std::size_t>> members_;
};

/// Outcome of the Cauchy-Schwarz intersector selection.
struct SelectionCert {
  /// 0-based index of the chosen member (least index among maximizers).
  std::size_t chosen = 0;
  /// sum_i |U_i cap U_chosen|, exact.
  BigInt measured;
  /// sum_i |U_i| >= r n^(1 - delta).
  Certificate precondition;
  /// measured >= r n^(1 - 2 delta).
  Certificate threshold;

  bool precondition_holds() const { return precondition.pass; }
  bool pass() const { return threshold.pass; }
};

SelectionCert select_popular_intersector(const FamilyOfSubsets& family, const Rational& delta);

/// The same selection over the family of right fibers {R_y : y in A^(k/2)}
/// of S, where delta is the exponent in |S| >= |A|^(k - delta). Scores are
/// computed through sum_y |R_x cap R_y| = sum_{z in R_x} |L_z| without
/// building the family. Certificate operands: "S", "A", "x".
struct PrefixSelection {
  AString prefix;
  StringSet fiber;  // R_x
  SelectionCert cert;
};

PrefixSelection select_popular_prefix(const StringSet& s, const Rational& delta);

struct DensePrefixResult {
  StringSet dense;  // H
  std::uint64_t threshold = 0;
  /// |H| > |A|^(k/2 - 2 delta). Operands: "H", "A".
  Certificate size_cert;
};

/// H = {h in A^(k/2) : |R_h| >= theta}.
DensePrefixResult dense_prefix_set(const StringSet& s, std::uint64_t theta, const Rational& delta);

struct CommonSuffixResult {
  AString suffix;      // z
  StringSet selected;  // H' = {h in H : hz in S}
  /// Every R_h with h in H lies inside R_x.
  bool fibers_nested = false;
  /// |H'| >= |H| |A|^(-2 delta) and |H'| >= |A|^(k/2 - 4 delta).
  /// Operands: "H'", "H", "A".
  std::vector<Certificate> certs;
};

/// Picks z in R_x maximizing |{h in H : hz in S}|, ties to the
/// canonical-least z. Throws InvalidArgument for an empty R_x.
CommonSuffixResult select_common_suffix(const StringSet& dense, const StringSet& s,
                                        const StringSet& fiber, const Rational& delta);

/// Whether h itself counts toward the strings sharing its sum.
/// including_self keeps |H' \ H''| < |Sigma(H')| * |H'| / (2 |Sigma(H')|), so
/// |H''| >= |H'| / 2 always holds; others_only can lose up to one string per
/// sum class more than that.
enum class SumCounting { including_self, others_only };
const char* to_string(SumCounting counting);
SumCounting sum_counting_from_string(const std::string& text);

struct PopularSumResult {
  StringSet popular;  // H''
  SumCounting counting = SumCounting::including_self;
  /// Strings sharing a sum needed to stay: |H'| / (2 |Sigma(H')|).
  Rational required;
  std::size_t sum_classes = 0;
  /// |H''| >= |H'| / 2. Operands: "H''", "H'".
  Certificate cert;
};

/// Keeps h in H' when at least |H'| / (2 |Sigma(H')|) strings of H' share
/// its sum, counted per `counting`.
PopularSumResult popular_sum_filter(const StringSet& selected,
                                    SumCounting counting = SumCounting::including_self);

struct PopularSuffixResult {
  AString suffix;  // w, length k/2 - 1
  ElemSet heads;   // A' = {a : aw in H'''}
  /// |A'| |A|^(k/2 - 1) >= |H'''|. Operands: "A'", "A", "H'''".
  Certificate cert;
};

/// Groups the strings by their last k/2 - 1 coordinates and returns the
/// largest group's heads; ties to the canonical-least suffix. Strings must
/// have length at least 2.
PopularSuffixResult popular_suffix_extract(const StringSet& strings);

}  // namespace hbsg
