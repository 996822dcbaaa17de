#pragma once

#include "hbsg/certificate.hpp"
#include "hbsg/group.hpp"
#include "hbsg/set_store.hpp"
#include "hbsg/strings.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Brute-force reference implementations. Nothing here calls the fast paths:
// group arithmetic is redone from the GroupSpec fields, string sets are only
// queried through membership, and power comparisons use their own routine.
namespace hbsg::oracle {

struct OracleLimits {
  std::size_t max_ambient = 64;
  int max_k = 8;
  /// Cap on |A|^k strings enumerated and on pair/quadruple loops.
  std::uint64_t max_enumeration = std::uint64_t{1} << 26;
  std::size_t max_subset_ground = 20;
};

GroupElem add(const GroupSpec& spec, GroupElem a, GroupElem b);
GroupElem negate(const GroupSpec& spec, GroupElem a);

ElemSet brute_sumset(const ElemSet& x, const ElemSet& y, const OracleLimits& limits = {});
ElemSet brute_difference(const ElemSet& x, const ElemSet& y, const OracleLimits& limits = {});
/// X + X + ... + X by repeated brute_sumset.
ElemSet brute_iterated(const ElemSet& x, int ell, const OracleLimits& limits = {});
/// Counts quadruples (x1, y1, x2, y2) with x1 + y1 = x2 + y2 one by one.
std::uint64_t brute_energy(const ElemSet& x, const ElemSet& y, const OracleLimits& limits = {});
ElemSet brute_graph_sumset(const ElemSet& a, const ElemSet& b, const BipartiteGraph& g);

/// Every string of A^length in lexicographic order, via an odometer.
std::vector<AString> all_strings(const ElemSet& ambient, int length,
                                 const OracleLimits& limits = {});
/// Members of S found by enumerating A^k and testing membership.
std::vector<AString> brute_members(const StringSet& s, const OracleLimits& limits = {});
GroupElem brute_string_sum(const GroupSpec& spec, const AString& x);
ElemSet brute_sigma(const StringSet& s, const OracleLimits& limits = {});
/// {y : xy in S}, sorted.
std::vector<AString> brute_fiber(const StringSet& s, const AString& prefix,
                                 const OracleLimits& limits = {});
/// {x : xy in S}, sorted.
std::vector<AString> brute_left_fiber(const StringSet& s, const AString& suffix,
                                      const OracleLimits& limits = {});
/// sum over y in A^(k/2) of |R_x cap R_y|.
std::uint64_t brute_fiber_overlap(const StringSet& s, const AString& x,
                                  const OracleLimits& limits = {});

struct SubsetGrowth {
  ElemSet best;
  std::uint64_t size = 0;  // |ell best|
};

/// Minimizes |ell X*| over subsets X* of A with |X*| >= min_size; ties go
/// to the subset whose sorted elements come first lexicographically.
SubsetGrowth best_subset_growth(const ElemSet& a, int ell, std::size_t min_size,
                                const OracleLimits& limits = {});

struct Verdict {
  int sign = 0;  // sign of lhs - rhs
  bool exact = true;
};

/// Compares two certificate expressions by raising both sides to the least
/// common denominator of the exponents.
Verdict compare_expressions(const Expression& lhs, const Expression& rhs);
bool holds(const Verdict& v, Relation relation);

struct AuditIssue {
  std::size_t entry = 0;
  std::string what;
};

struct AuditReport {
  std::size_t entries = 0;
  std::size_t factors_checked = 0;
  std::size_t relations_checked = 0;
  std::size_t derivations_checked = 0;
  std::size_t containments_checked = 0;
  std::size_t factors_skipped = 0;  // measure kind "given"
  std::vector<AuditIssue> issues;

  bool ok() const { return issues.empty(); }
};

/// Recomputes every measured factor, re-evaluates every relation and
/// rounding threshold, replays every derivation and selection rule, and
/// checks that |Sigma(S)| never grows across reassignments.
AuditReport audit_ledger(const CertificateLedger& ledger, const SetStore& store,
                         const OracleLimits& limits = {});

}  // namespace hbsg::oracle
