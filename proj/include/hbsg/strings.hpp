#pragma once

#include "hbsg/certificate.hpp"
#include "hbsg/exact.hpp"
#include "hbsg/group.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace hbsg {

/// A string x_1 ... x_k over the ambient set A.
struct AString {
  std::vector<GroupElem> coords;

  std::size_t length() const { return coords.size(); }
  friend auto operator<=>(const AString&, const AString&) = default;
};

AString concat(const AString& left, const AString& right);

/// Mixed-radix index of a string over the sorted ambient set; the first
/// coordinate is most significant, so code order is lexicographic order.
using StringCode = std::uint64_t;

/// A set S of length-k strings over A, stored either as a sorted list of
/// members or as A^k minus a sorted list of deletions. Both forms answer
/// every query identically. Copies share storage and the fiber cache.
class StringSet {
 public:
  enum class Form { explicit_list, complement };

  static constexpr double kDefaultExplicitBelow = 0.5;
  static constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 26;

  static StringSet full(ElemSet ambient, int k);
  static StringSet none(ElemSet ambient, int k);
  static StringSet from_strings(ElemSet ambient, int k, std::span<const AString> members);
  static StringSet with_deletions(ElemSet ambient, int k, std::span<const AString> deleted);
  /// Codes need not be sorted; they are deduplicated and range-checked.
  static StringSet from_codes(ElemSet ambient, int k, std::vector<StringCode> codes, Form form);

  const ElemSet& ambient() const { return ambient_; }
  int length() const { return k_; }
  Form form() const { return form_; }
  std::uint64_t size() const;
  std::uint64_t universe() const { return universe_; }
  bool empty() const { return size() == 0; }
  double density() const;

  /// Density below which normalized() prefers the explicit form.
  double explicit_below() const { return explicit_below_; }
  StringSet with_policy(double explicit_below) const;

  bool contains(const AString& s) const;
  bool contains_code(StringCode code) const;
  /// Throws InvalidArgument when a coordinate is outside A or the length is wrong.
  StringCode encode(const AString& s) const;
  AString decode(StringCode code) const;
  /// |A|^j.
  std::uint64_t radix_power(int j) const;

  /// Members for the explicit form, deletions for the complement form.
  std::span<const StringCode> stored_codes() const { return *codes_; }
  /// Member codes in ascending order. Throws BudgetExceeded past kMaterializeLimit.
  std::vector<StringCode> member_codes() const;
  std::vector<AString> strings() const;

  template <class Fn>
  void for_each_code(Fn&& fn) const {
    if (form_ == Form::explicit_list) {
      for (StringCode c : *codes_) fn(c);
      return;
    }
    auto del = codes_->begin();
    for (StringCode c = 0; c < universe_; ++c) {
      if (del != codes_->end() && *del == c) {
        ++del;
        continue;
      }
      fn(c);
    }
  }

  StringSet as_explicit() const;
  StringSet as_complement() const;
  /// Switches form according to explicit_below(), within kMaterializeLimit.
  StringSet normalized() const;

  /// |R_x| for every prefix x of length j, indexed by prefix code. Cached.
  std::shared_ptr<const std::vector<std::uint64_t>> prefix_counts(int j) const;
  /// |L_y| for every suffix y of length j, indexed by suffix code. Cached.
  std::shared_ptr<const std::vector<std::uint64_t>> suffix_counts(int j) const;

  friend bool operator==(const StringSet& a, const StringSet& b);

 private:
  struct FiberCache;

  StringSet(ElemSet ambient, int k, Form form, std::vector<StringCode> sorted_codes,
            double explicit_below);

  ElemSet ambient_;
  int k_ = 0;
  Form form_ = Form::explicit_list;
  std::uint64_t universe_ = 0;
  double explicit_below_ = kDefaultExplicitBelow;
  std::shared_ptr<const std::vector<StringCode>> codes_;
  std::shared_ptr<FiberCache> cache_;
};

/// Sum of the coordinates of x. Throws on an empty string.
GroupElem sigma_string(const GroupSpec& spec, const AString& x);

/// Sum image {x_1 + ... + x_k : x in S}. The complement form is handled by
/// convolving coordinate multiplicities of A^k and removing the deletions.
ElemSet sigma(const StringSet& s);

/// R_x = {y : xy in S} for a prefix x of length 1..k-1.
StringSet right_fiber(const StringSet& s, const AString& prefix);
/// L_y = {x : xy in S} for a suffix y of length 1..k-1.
StringSet left_fiber(const StringSet& s, const AString& suffix);
/// {xy : x in S}.
StringSet append_suffix(const StringSet& s, const AString& suffix);

/// {yz in S : z in suffixes}, where suffixes have length 1..k-1.
StringSet restrict_by_right(const StringSet& s, const StringSet& suffixes);

struct PowerOfTwoReduction {
  StringSet reduced;
  /// Fixed suffix y (empty when k is already a power of two).
  AString suffix;
  /// reduced with the suffix appended back; equal to `reduced` for the identity case.
  StringSet reduced_with_suffix;
  int original_k = 0;
  int reduced_k = 0;
  /// |S'| >= |S| / |A|^(k - k') and |Sigma(S' y)| <= |Sigma(S)|; empty for the identity.
  /// Operand names: "S", "A", "S_reduced", "S_reduced_y".
  std::vector<Certificate> certs;
};

/// Cuts k down to the largest power of two k' <= k by fixing the most
/// popular length-(k - k') suffix. Ties go to the canonical-least suffix.
PowerOfTwoReduction reduce_to_power_of_two(const StringSet& s);

class BipartiteGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Validates indices; duplicate edges collapse.
  BipartiteGraph(std::size_t left, std::size_t right, std::vector<Edge> edges);
  static BipartiteGraph complete(std::size_t left, std::size_t right);

  std::size_t left_size() const { return left_; }
  std::size_t right_size() const { return right_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

 private:
  std::size_t left_;
  std::size_t right_;
  std::vector<Edge> edges_;
};

/// {a_i + b_j : (i, j) in E}, indices in canonical element order.
ElemSet graph_restricted_sumset(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g);

struct SsvReport {
  std::size_t n = 0;
  /// |E| >= n^2 / K and |A +_G B| <= C n, as supplied.
  std::vector<Certificate> hypotheses;
  /// |A'| >= n / 16K^2, |B'| >= n / 4K, |A' + B'| <= 2^12 C^3 K^5 n.
  std::vector<Certificate> conclusions;

  bool conclusions_pass() const;
};

/// Checks candidate subsets against the restricted-sumset BSG conclusion
/// with the given density K and growth C. Not an extractor.
SsvReport ssv_bound_check(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g,
                          const ElemSet& a_prime, const ElemSet& b_prime, const Rational& K,
                          const Rational& C);

}  // namespace hbsg
