#pragma once

#include "hbsg/exact.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hbsg {

enum class Relation { ge, gt, le, lt, eq };
/// How the real-valued right-hand side was turned into an integer threshold.
enum class Rounding { none, exact, ceil, floor };

const char* to_string(Relation relation);
const char* to_string(Rounding rounding);
bool satisfies(std::strong_ordering order, Relation relation);

/// How a measured factor can be recomputed from named sets. Operand names
/// refer to whatever store the certificate is bound to.
enum class MeasureKind {
  given,                 // supplied by the caller, not recomputable
  size,                  // |X| for an element or string set
  sigma_size,            // |Sigma(S)|
  energy,                // E(X, Y) for element sets
  sigma_energy,          // E(Sigma(S), Sigma(T))
  sumset_size,           // |X + Y|
  iterated_sumset_size,  // |ell X|
  fiber_overlap,         // sum over prefixes y of |R_x cap R_y|; operands {S, x}
};

const char* to_string(MeasureKind kind);

struct Measure {
  MeasureKind kind = MeasureKind::given;
  std::vector<std::string> operands;
  int ell = 0;
};

struct Factor {
  std::string label;
  Measure measure;
  BigInt value;
  Rational exponent{1};
};

Factor factor(std::string label, BigInt value, Measure measure = {},
              Rational exponent = Rational(1));

/// coefficient * prod(value_i ^ exponent_i) with every value labelled and
/// traceable to a measurement.
struct Expression {
  Rational coefficient{1};
  std::vector<Factor> factors;

  Expression() = default;
  explicit Expression(Rational c) : coefficient(std::move(c)) {}
  Expression(Factor f) { factors.push_back(std::move(f)); }  // NOLINT: implicit by intent

  Expression& times(Factor f);
  Expression& scale(const Rational& c);
  PowerProduct to_power_product() const;
  std::string render() const;
};

/// Exact record of one inequality checked at run time.
struct Certificate {
  std::string op;
  std::string statement;
  Expression lhs;
  Relation relation = Relation::ge;
  Expression rhs;
  bool pass = false;
  bool exact = true;
  /// Non-binding certificates are reported but do not affect run status.
  bool binding = true;
  /// Integer the lhs was compared with after rounding the rhs; set only for
  /// integer-valued lhs. For ge/gt the test is lhs >= threshold, for le/lt
  /// lhs <= threshold.
  std::optional<BigInt> threshold;
  Rounding rounding = Rounding::none;
  std::string tiebreak;
  std::string note;

  double lhs_approx() const { return lhs.to_power_product().approx(); }
  double rhs_approx() const { return rhs.to_power_product().approx(); }
  /// Renames measure operands, e.g. a selector's "S" to a stored set key.
  void rebind(const std::map<std::string, std::string>& names);
};

Certificate certify(std::string op, std::string statement, Expression lhs, Relation relation,
                    Expression rhs);

struct Containment {
  std::string op;
  std::string statement;
  std::vector<std::string> operands;
  std::uint64_t checked = 0;
  std::uint64_t missing = 0;
  bool pass = false;
};

enum class EntryKind { certificate, containment, selection, derivation, reassignment, branch, halt };
const char* to_string(EntryKind kind);

struct LedgerEntry {
  std::size_t index = 0;
  EntryKind kind = EntryKind::certificate;
  std::string stage;
  std::string tag;
  std::string text;
  int iteration = 0;
  int k = 0;
  Rational delta;
  std::optional<Certificate> cert;
  std::optional<Containment> containment;
  /// For selections and reassignments: how `output` was derived from
  /// `inputs` (store keys), so the step can be replayed independently.
  std::string rule;
  std::vector<std::string> inputs;
  std::string output;
  std::vector<std::pair<std::string, std::string>> details;
};

/// Append-only record of a pipeline run.
class CertificateLedger {
 public:
  const LedgerEntry& append(LedgerEntry entry);
  std::span<const LedgerEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Binding certificates and containments that failed.
  std::size_t binding_failures() const;

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace hbsg
