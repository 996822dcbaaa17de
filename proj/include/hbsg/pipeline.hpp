#pragma once

#include "hbsg/bsg.hpp"
#include "hbsg/certificate.hpp"
#include "hbsg/exact.hpp"
#include "hbsg/group.hpp"
#include "hbsg/selection.hpp"
#include "hbsg/set_store.hpp"
#include "hbsg/strings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hbsg {

enum class RunStatus { proved_at_scale, best_effort, diagnostic_halt };
const char* to_string(RunStatus status);

struct PipelineParams {
  Rational epsilon{1, 5};
  Rational c{3, 2};
  Rational delta{1, 20};
  int max_iterations = 64;
  std::size_t min_ambient_size = 2;
  /// Descents and H'' reassignments that would leave k below this are not
  /// taken; the run moves on and records a failed certificate instead.
  int min_k = 4;
  std::vector<int> ell_list{2, 4};
  SumCounting sum_counting = SumCounting::including_self;
  BsgConfig bsg;

  /// Throws InvalidArgument unless 0 < epsilon < 1/2, c > 1, delta > 0,
  /// max_iterations >= 1, min_k >= 2 and every ell >= 1.
  void validate() const;
  /// 1 - epsilon / (400 c).
  Rational descent_exponent() const;
};

/// |S| >= |A|^(k - delta) and |Sigma(S)| < |A|^c, as certificates whose
/// operands are "S" and "A".
std::vector<Certificate> check_hypotheses(const ElemSet& a, const StringSet& s,
                                          const PipelineParams& p);

struct GrowthRow {
  int ell = 0;
  std::uint64_t size = 0;  // |ell A'|
  /// |ell A'| <= |A'|^(c (1 + epsilon ell)); non-binding for odd ell.
  Certificate bound;
  /// |ell A'| <= |A'|^(c (1 + 2 epsilon ell)), always non-binding.
  Certificate unrescaled;
  /// |ell A'| <= |ell Sigma|, for even ell only.
  std::optional<Certificate> via_sigma;
  bool in_scope = true;  // even ell
};

struct PipelineResult {
  explicit PipelineResult(const ElemSet& a) : ambient(a), a_prime(a.spec()), sigma_set(a.spec()) {}

  RunStatus status = RunStatus::diagnostic_halt;
  std::string halt_reason;
  ElemSet ambient;
  ElemSet a_prime;
  AString w;
  ElemSet sigma_set;  // the small-doubling Sigma from the final leg
  std::vector<GrowthRow> growth;
  std::optional<Containment> containment;
  int iterations = 0;
  int final_k = 0;
  Rational final_delta;
  std::uint64_t initial_sigma_size = 0;
  CertificateLedger ledger;
  SetStore store;
};

struct PipelineState {
  ElemSet ambient;
  std::string ambient_key;
  StringSet s;
  std::string s_key;
  int k = 0;
  Rational delta;
  int iteration = 0;
  /// x and R_x from the latest iteration step.
  AString x;
  std::string x_key;
  std::optional<StringSet> fiber_x;
  std::string fiber_x_key;
};

enum class Branch { loop, advance, halt };

/// Step-by-step driver. run_pipeline() calls the stages in order; tests can
/// drive them one at a time.
class Pipeline {
 public:
  Pipeline(ElemSet a, StringSet s, PipelineParams p);

  /// Power-of-two reduction and hypothesis checks. False means halted.
  bool start();
  /// Popular-intersector selection of x, S <- {yz in S : z in R_x}, delta <- 2 delta.
  void iteration_step();
  /// loop: S <- R_y, k <- k/2, delta <- 2 delta was applied.
  Branch descent_check();
  /// loop: S <- H'', k <- k/2, delta <- 5 delta was applied.
  /// advance: H' and H'' are ready for the final leg.
  Branch h_stage();
  /// Energy, BSG, H''', (w, A'), containment and growth table.
  void final_extraction();
  PipelineResult finish();

  /// Runs every stage until the final leg or a guard trips.
  PipelineResult run();

  const PipelineState& state() const { return state_; }
  const CertificateLedger& ledger() const { return result_.ledger; }
  const SetStore& store() const { return result_.store; }
  bool halted() const { return halted_; }

 private:
  struct HContext {
    StringSet h_prime;
    std::string h_prime_key;
    StringSet h_double;
    std::string h_double_key;
  };

  void halt(const std::string& stage, const std::string& reason);
  LedgerEntry entry(EntryKind kind, const std::string& stage, const std::string& tag,
                    const std::string& text) const;
  void record(const std::string& stage, const std::string& tag, Certificate cert,
              const std::map<std::string, std::string>& names = {});
  void derive(EntryKind kind, const std::string& stage, const std::string& text,
              const std::string& rule, std::vector<std::string> inputs,
              const std::string& output,
              std::vector<std::pair<std::string, std::string>> details = {});
  void reassign(const std::string& stage, const std::string& text, StringSet next,
                const std::string& next_key, int k, const Rational& delta);
  /// Refuses a move to length new_k, recording why. Returns true if blocked.
  bool blocked_descent(const std::string& stage, int new_k);
  std::uint64_t fiber_threshold() const;

  PipelineParams params_;
  PipelineState state_;
  PipelineResult result_;
  std::optional<HContext> h_;
  bool halted_ = false;
};

PipelineResult run_pipeline(const ElemSet& a, const StringSet& s, const PipelineParams& p);

}  // namespace hbsg
