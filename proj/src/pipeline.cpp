#include "hbsg/pipeline.hpp"

#include "hbsg/errors.hpp"
#include "hbsg/selection.hpp"
#include "hbsg/sumset.hpp"

#include <algorithm>

namespace hbsg {

namespace {

std::uint64_t size_of(const SetStore::Value& v) {
  if (auto* e = std::get_if<ElemSet>(&v)) return e->size();
  if (auto* s = std::get_if<StringSet>(&v)) return s->size();
  return std::get<AString>(v).length();
}

std::string render_string(const AString& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.coords[i].value);
  }
  return out + ")";
}

}  // namespace

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::proved_at_scale: return "proved-at-scale";
    case RunStatus::best_effort: return "best-effort";
    case RunStatus::diagnostic_halt: return "diagnostic-halt";
  }
  return "?";
}

void PipelineParams::validate() const {
  if (epsilon <= 0 || epsilon >= Rational(1, 2)) {
    throw InvalidArgument("epsilon must lie in (0, 1/2)");
  }
  if (c <= 1) throw InvalidArgument("c must exceed 1");
  if (delta <= 0) throw InvalidArgument("delta must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (min_k < 2) throw InvalidArgument("min_k must be at least 2");
  for (int ell : ell_list) {
    if (ell < 1) throw InvalidArgument("every ell must be at least 1");
  }
}

Rational PipelineParams::descent_exponent() const { return 1 - epsilon / (400 * c); }

std::vector<Certificate> check_hypotheses(const ElemSet& a, const StringSet& s,
                                          const PipelineParams& p) {
  const BigInt a_size = a.size();
  const Measure a_measure{MeasureKind::size, {"A"}};
  std::vector<Certificate> out;
  out.push_back(certify("hypothesis.density", "|S| >= |A|^(k - delta)",
                        factor("|S|", s.size(), {MeasureKind::size, {"S"}}), Relation::ge,
                        factor("|A|", a_size, a_measure, Rational(s.length()) - p.delta)));
  const std::uint64_t sigma_size = s.empty() ? 0 : sigma(s).size();
  out.push_back(certify("hypothesis.sigma", "|Sigma(S)| < |A|^c",
                        factor("|Sigma(S)|", sigma_size, {MeasureKind::sigma_size, {"S"}}),
                        Relation::lt, factor("|A|", a_size, a_measure, p.c)));
  return out;
}

Pipeline::Pipeline(ElemSet a, StringSet s, PipelineParams p)
    : params_(std::move(p)),
      state_{a, "", s, "", s.length(), params_.delta, 0, {}, "", {}, ""},
      result_(a) {
  params_.validate();
  if (!(s.ambient() == a)) throw InvalidArgument("string set is not over the given ambient set");
}

LedgerEntry Pipeline::entry(EntryKind kind, const std::string& stage, const std::string& tag,
                            const std::string& text) const {
  LedgerEntry e;
  e.kind = kind;
  e.stage = stage;
  e.tag = tag;
  e.text = text;
  e.iteration = state_.iteration;
  e.k = state_.k;
  e.delta = state_.delta;
  return e;
}

void Pipeline::halt(const std::string& stage, const std::string& reason) {
  halted_ = true;
  result_.halt_reason = reason;
  result_.ledger.append(entry(EntryKind::halt, stage, "halt", reason));
}

void Pipeline::record(const std::string& stage, const std::string& tag, Certificate cert,
                      const std::map<std::string, std::string>& names) {
  if (!names.empty()) cert.rebind(names);
  LedgerEntry e = entry(EntryKind::certificate, stage, tag, cert.statement);
  e.cert = std::move(cert);
  result_.ledger.append(std::move(e));
}

void Pipeline::derive(EntryKind kind, const std::string& stage, const std::string& text,
                      const std::string& rule, std::vector<std::string> inputs,
                      const std::string& output,
                      std::vector<std::pair<std::string, std::string>> details) {
  LedgerEntry e = entry(kind, stage, rule, text);
  e.rule = rule;
  e.inputs = std::move(inputs);
  e.output = output;
  e.details = std::move(details);
  e.details.emplace_back("size", std::to_string(size_of(result_.store.get(output))));
  result_.ledger.append(std::move(e));
}

void Pipeline::reassign(const std::string& stage, const std::string& text, StringSet next,
                        const std::string& next_key, int k, const Rational& delta) {
  LedgerEntry e = entry(EntryKind::reassignment, stage, "reassign", text);
  e.inputs = {state_.s_key};
  e.output = next_key;
  e.details = {{"k", std::to_string(state_.k) + "->" + std::to_string(k)},
               {"delta", to_string(state_.delta) + "->" + to_string(delta)},
               {"size", std::to_string(state_.s.size()) + "->" + std::to_string(next.size())}};
  result_.ledger.append(std::move(e));
  state_.s = std::move(next);
  state_.s_key = next_key;
  state_.k = k;
  state_.delta = delta;
}

bool Pipeline::blocked_descent(const std::string& stage, int new_k) {
  if (new_k >= params_.min_k) return false;
  Certificate cert = certify(stage + ".min_k", "k/2 >= min_k", factor("k/2", new_k),
                             Relation::ge, factor("min_k", params_.min_k));
  cert.note = "reassignment not taken; the run continues at the current k";
  record(stage, "min_k", std::move(cert));
  return true;
}

std::uint64_t Pipeline::fiber_threshold() const {
  PowerProduct bound(1);
  bound.times(state_.ambient.size(), Rational(state_.k / 2) - 2 * state_.delta);
  auto theta = ceil_value(bound);
  if (!theta) throw BudgetExceeded("fiber threshold out of range");
  return static_cast<std::uint64_t>(*theta);
}

bool Pipeline::start() {
  SetStore& store = result_.store;
  state_.ambient_key = store.put("A", state_.ambient);
  state_.s_key = store.put("S", state_.s);
  const std::map<std::string, std::string> names{{"S", state_.s_key},
                                                 {"A", state_.ambient_key}};

  if (state_.ambient.size() < params_.min_ambient_size) {
    halt("start", "|A| is below min_ambient_size");
    return false;
  }
  if (state_.k < 2) {
    halt("start", "k is below 2");
    return false;
  }
  auto hypotheses = check_hypotheses(state_.ambient, state_.s, params_);
  result_.initial_sigma_size = state_.s.empty() ? 0 : sigma(state_.s).size();
  bool ok = true;
  for (auto& cert : hypotheses) {
    ok = ok && cert.pass;
    record("check_hypotheses", "hypothesis", std::move(cert), names);
  }
  if (!ok) {
    halt("check_hypotheses", "hypotheses not satisfied");
    return false;
  }

  PowerOfTwoReduction red = reduce_to_power_of_two(state_.s);
  if (red.reduced_k == red.original_k) return true;

  const std::string y_key = store.put("y", red.suffix);
  const std::string red_key = store.put("S", red.reduced);
  const std::string red_y_key = store.put("S_y", red.reduced_with_suffix);
  derive(EntryKind::selection, "reduce", "y maximizes |{x : xy in S}|", "max_left_fiber_suffix",
         {state_.s_key}, y_key, {{"y", render_string(red.suffix)}});
  derive(EntryKind::derivation, "reduce", "{x : xy in S}", "left_fiber", {state_.s_key, y_key},
         red_key);
  derive(EntryKind::derivation, "reduce", "{xy : x in S'}", "append_suffix", {red_key, y_key},
         red_y_key);
  for (auto& cert : red.certs) {
    record("reduce", "reduce", std::move(cert),
           {{"S", state_.s_key},
            {"A", state_.ambient_key},
            {"S_reduced", red_key},
            {"S_reduced_y", red_y_key}});
  }
  record("reduce", "reduce",
         certify("reduce.density", "|S'| >= |A|^(k' - delta)",
                 factor("|S'|", red.reduced.size(), {MeasureKind::size, {red_key}}),
                 Relation::ge,
                 factor("|A|", state_.ambient.size(), {MeasureKind::size, {state_.ambient_key}},
                        Rational(red.reduced_k) - state_.delta)));
  reassign("reduce", "S <- S', k <- k'", red.reduced, red_key, red.reduced_k, state_.delta);
  return true;
}

void Pipeline::iteration_step() {
  SetStore& store = result_.store;
  ++state_.iteration;
  result_.iterations = state_.iteration;

  PrefixSelection sel = select_popular_prefix(state_.s, state_.delta);
  state_.x = sel.prefix;
  state_.x_key = store.put("x", sel.prefix);
  state_.fiber_x = sel.fiber;
  state_.fiber_x_key = store.put("R_x", sel.fiber);
  derive(EntryKind::selection, "iteration", "x maximizes sum_y |R_x cap R_y|",
         "max_fiber_overlap", {state_.s_key}, state_.x_key,
         {{"x", render_string(sel.prefix)}, {"score", sel.cert.measured.str()}});
  derive(EntryKind::derivation, "iteration", "R_x", "right_fiber",
         {state_.s_key, state_.x_key}, state_.fiber_x_key);
  const std::map<std::string, std::string> names{
      {"S", state_.s_key}, {"A", state_.ambient_key}, {"x", state_.x_key}};
  record("iteration", "intersector", sel.cert.precondition, names);
  record("iteration", "intersector", sel.cert.threshold, names);

  StringSet next = restrict_by_right(state_.s, sel.fiber).normalized();
  const std::string next_key = store.put("S", next);
  derive(EntryKind::derivation, "iteration", "{yz in S : z in R_x}", "restrict_right",
         {state_.s_key, state_.fiber_x_key}, next_key);
  record("iteration", "identity",
         certify("iteration.restrict_size", "|S'| = sum_y |R_x cap R_y|",
                 factor("|S'|", next.size(), {MeasureKind::size, {next_key}}), Relation::eq,
                 factor("sum_y|R_x cap R_y|", sel.cert.measured,
                        {MeasureKind::fiber_overlap, {state_.s_key, state_.x_key}})));
  reassign("iteration", "S <- S', delta <- 2 delta", std::move(next), next_key, state_.k,
           2 * state_.delta);
}

Branch Pipeline::descent_check() {
  SetStore& store = result_.store;
  const int half = state_.k / 2;
  const std::uint64_t theta = fiber_threshold();
  const std::uint64_t sigma_s = sigma(state_.s).size();
  const Rational exponent = params_.descent_exponent();
  PowerProduct limit_value(1);
  limit_value.times(sigma_s, exponent);
  auto limit = floor_value(limit_value);
  if (!limit) throw BudgetExceeded("descent bound out of range");

  auto counts = state_.s.prefix_counts(half);
  const StringSet probe = StringSet::none(state_.ambient, half);
  std::optional<AString> found;
  std::optional<StringSet> found_fiber;
  for (StringCode y = 0; y < counts->size() && !found; ++y) {
    if ((*counts)[y] < theta) continue;
    AString prefix = probe.decode(y);
    StringSet fiber = right_fiber(state_.s, prefix);
    if (BigInt(sigma(fiber).size()) <= *limit) {
      found = std::move(prefix);
      found_fiber = std::move(fiber);
    }
  }
  const std::vector<std::pair<std::string, std::string>> bounds{
      {"theta", std::to_string(theta)}, {"sigma_limit", limit->str()}, {"rounding", "ceil/floor"}};
  if (!found) {
    LedgerEntry e = entry(EntryKind::branch, "descent", "advance",
                          "no y with |R_y| >= theta and |Sigma(R_y)| <= |Sigma(S)|^(1 - eps/400c)");
    e.inputs = {state_.s_key};
    e.details = bounds;
    result_.ledger.append(std::move(e));
    return Branch::advance;
  }

  const std::string y_key = store.put("y", *found);
  const std::string ry_key = store.put("R_y", *found_fiber);
  auto details = bounds;
  details.emplace_back("y", render_string(*found));
  derive(EntryKind::selection, "descent", "least y with a dense fiber of small sum image",
         "least_descent_prefix", {state_.s_key}, y_key, details);
  derive(EntryKind::derivation, "descent", "R_y", "right_fiber", {state_.s_key, y_key}, ry_key);
  record("descent", "descent",
         certify("descent.fiber_size", "|R_y| >= |A|^(k/2 - 2 delta)",
                 factor("|R_y|", found_fiber->size(), {MeasureKind::size, {ry_key}}),
                 Relation::ge,
                 factor("|A|", state_.ambient.size(), {MeasureKind::size, {state_.ambient_key}},
                        Rational(half) - 2 * state_.delta)));
  record("descent", "descent",
         certify("descent.sigma", "|Sigma(R_y)| <= |Sigma(S)|^(1 - eps/400c)",
                 factor("|Sigma(R_y)|", sigma(*found_fiber).size(),
                        {MeasureKind::sigma_size, {ry_key}}),
                 Relation::le,
                 factor("|Sigma(S)|", sigma_s, {MeasureKind::sigma_size, {state_.s_key}},
                        exponent)));
  if (half < 2) {
    halt("descent", "k would drop below 2");
    return Branch::halt;
  }
  if (blocked_descent("descent", half)) {
    result_.ledger.append(entry(EntryKind::branch, "descent", "advance",
                                "descent not taken below min_k; continuing to the H stage"));
    return Branch::advance;
  }
  reassign("descent", "S <- R_y, k <- k/2, delta <- 2 delta", found_fiber->normalized(), ry_key,
           half, 2 * state_.delta);
  result_.ledger.append(entry(EntryKind::branch, "descent", "loop", "restart the iteration"));
  return Branch::loop;
}

Branch Pipeline::h_stage() {
  SetStore& store = result_.store;
  const int half = state_.k / 2;
  const std::uint64_t theta = fiber_threshold();
  const std::string& a_key = state_.ambient_key;

  DensePrefixResult dense = dense_prefix_set(state_.s, theta, state_.delta);
  const std::string h_key = store.put("H", dense.dense);
  derive(EntryKind::derivation, "h_stage", "{h : |R_h| >= theta}", "dense_prefix",
         {state_.s_key}, h_key, {{"theta", std::to_string(theta)}, {"rounding", "ceil"}});
  record("h_stage", "dense_prefix", dense.size_cert, {{"H", h_key}, {"A", a_key}});
  if (dense.dense.empty()) {
    halt("h_stage", "H is empty");
    return Branch::halt;
  }

  CommonSuffixResult common = select_common_suffix(dense.dense, state_.s, *state_.fiber_x,
                                                   state_.delta);
  const std::string z_key = store.put("z", common.suffix);
  const std::string hp_key = store.put("H'", common.selected);
  derive(EntryKind::selection, "h_stage", "z in R_x maximizes |{h in H : hz in S}|",
         "max_common_suffix", {h_key, state_.s_key, state_.fiber_x_key}, z_key,
         {{"z", render_string(common.suffix)}});
  derive(EntryKind::derivation, "h_stage", "{h in H : hz in S}", "common_suffix",
         {h_key, state_.s_key, z_key}, hp_key);
  {
    LedgerEntry e = entry(EntryKind::containment, "h_stage", "nesting",
                          "R_h is contained in R_x for every h in H");
    e.containment = Containment{"h_stage.nesting", e.text,
                                {h_key, state_.s_key, state_.fiber_x_key},
                                dense.dense.size(), common.fibers_nested ? 0u : 1u,
                                common.fibers_nested};
    result_.ledger.append(std::move(e));
  }
  for (auto& cert : common.certs) {
    record("h_stage", "common_suffix", std::move(cert),
           {{"H'", hp_key}, {"H", h_key}, {"A", a_key}});
  }
  if (common.selected.empty()) {
    halt("h_stage", "H' is empty");
    return Branch::halt;
  }

  PopularSumResult popular = popular_sum_filter(common.selected, params_.sum_counting);
  const std::string hpp_key = store.put("H''", popular.popular);
  derive(EntryKind::derivation, "h_stage", "strings of H' sharing a popular sum", "popular_sum",
         {hp_key}, hpp_key,
         {{"required", to_string(popular.required)}, {"counting", to_string(popular.counting)}});
  record("h_stage", "popular_sum", popular.cert, {{"H''", hpp_key}, {"H'", hp_key}});
  if (popular.popular.empty()) {
    halt("h_stage", "H'' is empty");
    return Branch::halt;
  }

  const std::uint64_t sigma_s = sigma(state_.s).size();
  const std::uint64_t sigma_hp = sigma(common.selected).size();
  const std::uint64_t sigma_hpp = sigma(popular.popular).size();
  const Factor f_hpp = factor("|Sigma(H'')|", sigma_hpp, {MeasureKind::sigma_size, {hpp_key}});
  const Factor f_hp = factor("|Sigma(H')|", sigma_hp, {MeasureKind::sigma_size, {hp_key}});
  const Measure s_measure{MeasureKind::sigma_size, {state_.s_key}};
  record("h_stage", "sigma_chain",
         certify("h_stage.sigma_subset", "|Sigma(H'')| <= |Sigma(H')|", f_hpp, Relation::le, f_hp));
  record("h_stage", "sigma_chain",
         certify("h_stage.sigma_translate", "|Sigma(H')| <= |Sigma(S)|", f_hp, Relation::le,
                 factor("|Sigma(S)|", sigma_s, s_measure)));

  const Rational exponent = params_.descent_exponent();
  Certificate check = certify("h_stage.check", "|Sigma(H'')| <= |Sigma(S)|^(1 - eps/400c)",
                              f_hpp, Relation::le,
                              factor("|Sigma(S)|", sigma_s, s_measure, exponent));
  check.binding = false;
  check.note = "branch test";
  const bool shrink = check.pass;
  record("h_stage", "branch_test", std::move(check));

  auto lower_cert = [&] {
    return certify("h_stage.lower", "|Sigma(S)|^(1 - eps/400c) <= |Sigma(H'')|", f_hpp,
                   Relation::ge, factor("|Sigma(S)|", sigma_s, s_measure, exponent));
  };

  if (shrink) {
    if (half < 2) {
      halt("h_stage", "k would drop below 2");
      return Branch::halt;
    }
    if (!blocked_descent("h_stage", half)) {
      reassign("h_stage", "S <- H'', k <- k/2, delta <- 5 delta", popular.popular, hpp_key,
               half, 5 * state_.delta);
      result_.ledger.append(entry(EntryKind::branch, "h_stage", "loop", "restart the iteration"));
      return Branch::loop;
    }
  }
  record("h_stage", "H'H''", lower_cert());
  h_ = HContext{common.selected, hp_key, popular.popular, hpp_key};
  result_.ledger.append(entry(EntryKind::branch, "h_stage", "advance", "continue to the final leg"));
  return Branch::advance;
}

void Pipeline::final_extraction() {
  if (!h_) throw Error("final_extraction called before h_stage advanced");
  SetStore& store = result_.store;
  const GroupSpec& spec = state_.ambient.spec();
  const int half = state_.k / 2;
  const std::string stage = "final";
  if (half < 2) {
    halt(stage, "final leg needs k/2 >= 2");
    return;
  }
  const std::string& a_key = state_.ambient_key;
  const Measure a_measure{MeasureKind::size, {a_key}};
  const BigInt a_size = state_.ambient.size();
  const Rational& eps = params_.epsilon;
  const Rational& c = params_.c;
  const Rational exponent = params_.descent_exponent();

  // Energy between the sum images.
  const ElemSet x_full = sigma(h_->h_double);
  const ElemSet y_full = sigma(*state_.fiber_x);
  const std::string x_key = store.put("Sigma(H'')", x_full);
  const std::string y_key = store.put("Sigma(R_x)", y_full);
  derive(EntryKind::derivation, stage, "Sigma(H'')", "sigma", {h_->h_double_key}, x_key);
  derive(EntryKind::derivation, stage, "Sigma(R_x)", "sigma", {state_.fiber_x_key}, y_key);
  const std::uint64_t sigma_s = sigma(state_.s).size();
  const Measure s_measure{MeasureKind::sigma_size, {state_.s_key}};
  record(stage, "energy",
         certify("final.energy", "E(Sigma(H''), Sigma(R_x)) >= |Sigma(S)|^(3 - 3 eps/400c)",
                 factor("E", additive_energy(x_full, y_full),
                        {MeasureKind::sigma_energy, {h_->h_double_key, state_.fiber_x_key}}),
                 Relation::ge, factor("|Sigma(S)|", sigma_s, s_measure, 3 * exponent)));

  // Equal sizes for the extractor, truncating in canonical order.
  const std::size_t m = std::min(x_full.size(), y_full.size());
  std::string xe_key = x_key;
  std::string ye_key = y_key;
  ElemSet x_eq = x_full;
  ElemSet y_eq = y_full;
  if (x_full.size() != m) {
    x_eq = x_full.truncate(m);
    xe_key = store.put("X", x_eq);
    derive(EntryKind::derivation, stage, "first m elements", "truncate", {x_key}, xe_key,
           {{"count", std::to_string(m)}});
  }
  if (y_full.size() != m) {
    y_eq = y_full.truncate(m);
    ye_key = store.put("Y", y_eq);
    derive(EntryKind::derivation, stage, "first m elements", "truncate", {y_key}, ye_key,
           {{"count", std::to_string(m)}});
  }

  BsgResult bsg = bsg_extract(x_eq, y_eq, params_.bsg);
  const ElemSet& sig = bsg.x_prime;
  const std::string sig_key = store.put("Sigma", sig);
  derive(EntryKind::derivation, stage, "popularity-graph extraction", "subset", {xe_key}, sig_key,
         {{"source", bsg.source},
          {"candidates", std::to_string(bsg.candidates_scanned)},
          {"density", to_string(bsg.density)}});
  const std::map<std::string, std::string> bsg_names{{"X'", sig_key}, {"X", xe_key}, {"Y", ye_key}};
  record(stage, "bsg", bsg.size_cert, bsg_names);
  record(stage, "bsg", bsg.doubling_cert, bsg_names);
  result_.sigma_set = sig;
  if (sig.empty()) {
    halt(stage, "extractor returned an empty set");
    return;
  }

  const ElemSet sig_sum = sumset(sig, sig);
  const std::uint64_t sigma_hpp = x_full.size();
  const std::uint64_t sigma_hp = sigma(h_->h_prime).size();
  const Factor f_sig = factor("|Sigma|", sig.size(), {MeasureKind::size, {sig_key}});
  auto f_hpp = [&](Rational e) {
    return factor("|Sigma(H'')|", sigma_hpp, {MeasureKind::sigma_size, {h_->h_double_key}}, e);
  };
  const Factor f_hp = factor("|H'|", h_->h_prime.size(), {MeasureKind::size, {h_->h_prime_key}});
  record(stage, "bsg",
         certify("final.sigma_size", "|Sigma| >= |Sigma(H'')|^(1 - eps/2c)", f_sig, Relation::ge,
                 f_hpp(1 - eps / (2 * c))));
  record(stage, "bsg",
         certify("final.small_doubling", "|Sigma + Sigma| <= |Sigma|^(1 + eps/2c)",
                 factor("|Sigma+Sigma|", sig_sum.size(), {MeasureKind::sumset_size, {sig_key, sig_key}}),
                 Relation::le,
                 factor("|Sigma|", sig.size(), {MeasureKind::size, {sig_key}}, 1 + eps / (2 * c))));

  // H''' = {h in H'' : Sigma(h) in Sigma}.
  std::vector<StringCode> kept;
  h_->h_double.for_each_code([&](StringCode code) {
    if (sig.contains(sigma_string(spec, h_->h_double.decode(code)))) kept.push_back(code);
  });
  const StringSet hppp =
      StringSet::from_codes(state_.ambient, half, std::move(kept), StringSet::Form::explicit_list);
  const std::string hppp_key = store.put("H'''", hppp);
  derive(EntryKind::derivation, stage, "{h in H'' : Sigma(h) in Sigma}", "sum_in",
         {h_->h_double_key, sig_key}, hppp_key);
  const Factor f_hppp = factor("|H'''|", hppp.size(), {MeasureKind::size, {hppp_key}});
  record(stage, "H'''",
         certify("final.h3_count", "|H'''| >= |Sigma| |H'| / (2 |Sigma(H')|)", f_hppp,
                 Relation::ge,
                 Expression(Rational(1, 2))
                     .times(f_sig)
                     .times(f_hp)
                     .times(factor("|Sigma(H')|", sigma_hp,
                                   {MeasureKind::sigma_size, {h_->h_prime_key}}, -1))));
  Certificate chain = certify(
      "final.h3_chain", "|H'''| >= |Sigma(H'')|^(1 - eps/2c) |Sigma(H'')|^(-1/(1 - eps/400c)) |H'| / 2",
      f_hppp, Relation::ge,
      Expression(Rational(1, 2))
          .times(f_hpp(1 - eps / (2 * c) - 1 / exponent))
          .times(f_hp));
  chain.note = "rhs rounded up to an integer count";
  record(stage, "H'''", std::move(chain));
  record(stage, "H'''",
         certify("final.h3_simplified", "|H'''| >= |Sigma(H'')|^(-eps/c) |H'|", f_hppp,
                 Relation::ge, Expression(f_hpp(-eps / c)).times(f_hp)));
  record(stage, "H'''",
         certify("final.h3_floor", "|H'''| >= |A|^(k/2 - 4 delta - eps)", f_hppp, Relation::ge,
                 factor("|A|", a_size, a_measure, Rational(half) - 4 * state_.delta - eps)));
  if (hppp.empty()) {
    halt(stage, "H''' is empty");
    return;
  }

  PopularSuffixResult suffix = popular_suffix_extract(hppp);
  const std::string w_key = store.put("w", suffix.suffix);
  const std::string ap_key = store.put("A'", suffix.heads);
  derive(EntryKind::selection, stage, "w maximizes |{a : aw in H'''}|", "max_suffix_heads",
         {hppp_key}, w_key, {{"w", render_string(suffix.suffix)}});
  derive(EntryKind::derivation, stage, "{a : aw in H'''}", "suffix_heads", {hppp_key, w_key},
         ap_key);
  record(stage, "A'", suffix.cert, {{"A'", ap_key}, {"A", a_key}, {"H'''", hppp_key}});
  const ElemSet& a_prime = suffix.heads;
  record(stage, "A'",
         certify("final.a_prime_floor", "|A'| >= |A|^(1 - 4 delta - eps)",
                 factor("|A'|", a_prime.size(), {MeasureKind::size, {ap_key}}), Relation::ge,
                 factor("|A|", a_size, a_measure, 1 - 4 * state_.delta - eps)));
  result_.a_prime = a_prime;
  result_.w = suffix.suffix;

  // A' + A' + 2 Sigma(w) inside Sigma + Sigma.
  const GroupElem shift = spec.multiply(sigma_string(spec, suffix.suffix), 2);
  Containment containment{"final.containment", "A' + A' + 2 Sigma(w) is contained in Sigma + Sigma",
                          {ap_key, w_key, sig_key}, 0, 0, false};
  for (GroupElem a : a_prime) {
    for (GroupElem b : a_prime) {
      ++containment.checked;
      if (!sig_sum.contains(spec.add(spec.add(a, b), shift))) ++containment.missing;
    }
  }
  containment.pass = containment.missing == 0;
  result_.containment = containment;
  {
    LedgerEntry e = entry(EntryKind::containment, stage, "containment", containment.statement);
    e.containment = std::move(containment);
    result_.ledger.append(std::move(e));
  }

  // Growth table.
  const Factor base = factor("|A'|", a_prime.size(), {MeasureKind::size, {ap_key}});
  for (int ell : params_.ell_list) {
    GrowthRow row;
    row.ell = ell;
    row.in_scope = ell % 2 == 0;
    row.size = iterated_sumset(a_prime, ell).size();
    const Factor measured = factor("|ell A'|", row.size,
                                   {MeasureKind::iterated_sumset_size, {ap_key}, ell});
    Factor bound = base;
    bound.exponent = c * (1 + eps * ell);
    row.bound = certify("growth.bound", "|ell A'| <= |A'|^(c (1 + eps ell))", measured,
                        Relation::le, bound);
    if (!row.in_scope) {
      row.bound.binding = false;
      row.bound.note = "odd ell lies outside the even-ell derivation";
    }
    bound.exponent = c * (1 + 2 * eps * ell);
    row.unrescaled = certify("growth.unrescaled", "|ell A'| <= |A'|^(c (1 + 2 eps ell))",
                             measured, Relation::le, bound);
    row.unrescaled.binding = false;
    row.unrescaled.note = "bound before rescaling eps";
    if (row.in_scope) {
      row.via_sigma = certify(
          "growth.via_sigma", "|ell A'| <= |ell Sigma|", measured, Relation::le,
          factor("|ell Sigma|", iterated_sumset(sig, ell).size(),
                 {MeasureKind::iterated_sumset_size, {sig_key}, ell}));
    }
    record("growth", "ell=" + std::to_string(ell), row.bound);
    record("growth", "ell=" + std::to_string(ell), row.unrescaled);
    if (row.via_sigma) record("growth", "ell=" + std::to_string(ell), *row.via_sigma);
    result_.growth.push_back(std::move(row));
  }
}

PipelineResult Pipeline::finish() {
  if (halted_) {
    result_.status = RunStatus::diagnostic_halt;
  } else {
    result_.status = result_.ledger.binding_failures() == 0 ? RunStatus::proved_at_scale
                                                            : RunStatus::best_effort;
  }
  result_.final_k = state_.k;
  result_.final_delta = state_.delta;
  return std::move(result_);
}

PipelineResult Pipeline::run() {
  if (!start()) return finish();
  while (!halted_) {
    if (state_.iteration >= params_.max_iterations) {
      halt("iteration", "max_iterations reached");
      break;
    }
    iteration_step();
    Branch b = descent_check();
    if (b == Branch::halt) break;
    if (b == Branch::loop) continue;
    b = h_stage();
    if (b == Branch::halt) break;
    if (b == Branch::loop) continue;
    final_extraction();
    break;
  }
  return finish();
}

PipelineResult run_pipeline(const ElemSet& a, const StringSet& s, const PipelineParams& p) {
  return Pipeline(a, s, p).run();
}

}  // namespace hbsg
