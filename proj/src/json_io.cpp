#include "hbsg/json_io.hpp"

#include "hbsg/errors.hpp"

#include <limits>

namespace hbsg {

Json big_to_json(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() &&
      value <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(value);
  }
  return value.str();
}

BigInt big_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw InvalidArgument("expected an integer, got " + j.dump());
}

Json rational_to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InvalidArgument("expected a rational, got " + j.dump());
}

Json to_json(const GroupSpec& spec) {
  switch (spec.kind()) {
    case GroupSpec::Kind::cyclic: return {{"kind", "cyclic"}, {"modulus", spec.modulus()}};
    case GroupSpec::Kind::vector_space:
      return {{"kind", "vector"}, {"p", spec.prime()}, {"d", spec.dimension()}};
    case GroupSpec::Kind::integer_window:
      return {{"kind", "integer"}, {"lo", spec.lo()}, {"hi", spec.hi()}};
  }
  return {};
}

GroupSpec group_spec_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") return GroupSpec::cyclic(j.at("modulus").get<std::int64_t>());
  if (kind == "vector") {
    return GroupSpec::vector_space(j.at("p").get<std::int64_t>(), j.at("d").get<int>());
  }
  if (kind == "integer") {
    return GroupSpec::integer_window(j.at("lo").get<std::int64_t>(), j.at("hi").get<std::int64_t>());
  }
  throw InvalidArgument("unknown group kind " + kind);
}

Json element_to_json(const GroupSpec& spec, GroupElem e) {
  if (spec.kind() == GroupSpec::Kind::vector_space) return spec.coordinates(e);
  return e.value;
}

GroupElem element_from_json(const GroupSpec& spec, const Json& j) {
  if (j.is_array()) {
    auto coords = j.get<std::vector<std::int64_t>>();
    return spec.from_coordinates(coords);
  }
  return spec.element(j.get<std::int64_t>());
}

Json to_json(const ElemSet& set) {
  Json elements = Json::array();
  for (GroupElem e : set) elements.push_back(element_to_json(set.spec(), e));
  return {{"spec", to_json(set.spec())}, {"elements", std::move(elements)}};
}

ElemSet elem_set_from_json(const GroupSpec& spec, const Json& elements) {
  std::vector<GroupElem> out;
  for (const auto& e : elements) out.push_back(element_from_json(spec, e));
  return ElemSet(spec, std::move(out));
}

ElemSet elem_set_from_json(const Json& j) {
  return elem_set_from_json(group_spec_from_json(j.at("spec")), j.at("elements"));
}

Json to_json(const AString& s, const GroupSpec& spec) {
  Json out = Json::array();
  for (GroupElem e : s.coords) out.push_back(element_to_json(spec, e));
  return out;
}

AString string_from_json(const GroupSpec& spec, const Json& j) {
  AString s;
  for (const auto& e : j) s.coords.push_back(element_from_json(spec, e));
  return s;
}

Json to_json(const StringSet& s) {
  const GroupSpec& spec = s.ambient().spec();
  Json list = Json::array();
  for (StringCode c : s.stored_codes()) list.push_back(to_json(s.decode(c), spec));
  const char* field = s.form() == StringSet::Form::explicit_list ? "strings" : "deleted";
  return {{"k", s.length()}, {field, std::move(list)}};
}

StringSet string_set_from_json(const ElemSet& ambient, const Json& j) {
  const int k = j.at("k").get<int>();
  std::vector<AString> list;
  const bool complement = j.contains("deleted");
  for (const auto& s : j.at(complement ? "deleted" : "strings")) {
    list.push_back(string_from_json(ambient.spec(), s));
  }
  return complement ? StringSet::with_deletions(ambient, k, list)
                    : StringSet::from_strings(ambient, k, list);
}

Json to_json(const BipartiteGraph& g) {
  Json edges = Json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
  return {{"left", g.left_size()}, {"right", g.right_size()}, {"edges", std::move(edges)}};
}

BipartiteGraph graph_from_json(const Json& j) {
  std::vector<BipartiteGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  }
  return BipartiteGraph(j.at("left").get<std::size_t>(), j.at("right").get<std::size_t>(),
                        std::move(edges));
}

Json to_json(const Expression& e) {
  Json factors = Json::array();
  for (const auto& f : e.factors) {
    Json item{{"label", f.label},
              {"value", big_to_json(f.value)},
              {"exponent", rational_to_json(f.exponent)},
              {"measure", to_string(f.measure.kind)}};
    if (!f.measure.operands.empty()) item["operands"] = f.measure.operands;
    if (f.measure.ell) item["ell"] = f.measure.ell;
    factors.push_back(std::move(item));
  }
  return {{"coefficient", rational_to_json(e.coefficient)},
          {"factors", std::move(factors)},
          {"text", e.render()}};
}

Json to_json(const Certificate& c) {
  Json out{{"op", c.op},
           {"statement", c.statement},
           {"lhs", to_json(c.lhs)},
           {"relation", to_string(c.relation)},
           {"rhs", to_json(c.rhs)},
           {"pass", c.pass},
           {"exact", c.exact},
           {"binding", c.binding},
           {"rounding", to_string(c.rounding)},
           {"lhs_approx", c.lhs_approx()},
           {"rhs_approx", c.rhs_approx()},
           {"tiebreak", c.tiebreak}};
  if (c.threshold) out["threshold"] = big_to_json(*c.threshold);
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

Json to_json(const Containment& c) {
  return {{"op", c.op},           {"statement", c.statement}, {"operands", c.operands},
          {"checked", c.checked}, {"missing", c.missing},     {"pass", c.pass}};
}

Json to_json(const LedgerEntry& e) {
  Json out{{"index", e.index},         {"kind", to_string(e.kind)}, {"stage", e.stage},
           {"tag", e.tag},             {"text", e.text},            {"iteration", e.iteration},
           {"k", e.k},                 {"delta", rational_to_json(e.delta)}};
  if (e.cert) out["certificate"] = to_json(*e.cert);
  if (e.containment) out["containment"] = to_json(*e.containment);
  if (!e.rule.empty()) out["rule"] = e.rule;
  if (!e.inputs.empty()) out["inputs"] = e.inputs;
  if (!e.output.empty()) out["output"] = e.output;
  if (!e.details.empty()) {
    Json details = Json::array();
    for (const auto& [k, v] : e.details) details.push_back({k, v});
    out["details"] = std::move(details);
  }
  return out;
}

Json to_json(const CertificateLedger& ledger) {
  Json out = Json::array();
  for (const auto& e : ledger.entries()) out.push_back(to_json(e));
  return out;
}

Json to_json(const PlunneckeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"ell", row.ell},
                    {"size", row.size},
                    {"bound", rational_to_json(row.bound)},
                    {"pass", row.pass}});
  }
  return {{"doubling", rational_to_json(r.doubling)},
          {"base_size", r.base_size},
          {"rows", std::move(rows)},
          {"pass", r.all_pass()}};
}

Json to_json(const RuzsaReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}};
}

Json to_json(const SelectionCert& c) {
  return {{"chosen", c.chosen},
          {"measured", big_to_json(c.measured)},
          {"precondition", to_json(c.precondition)},
          {"threshold", to_json(c.threshold)},
          {"pass", c.pass()}};
}

Json to_json(const BsgResult& r) {
  return {{"x_prime", to_json(r.x_prime)},
          {"n", r.n},
          {"energy", r.energy},
          {"density", rational_to_json(r.density)},
          {"doubled_size", r.doubled_size},
          {"size_cert", to_json(r.size_cert)},
          {"doubling_cert", to_json(r.doubling_cert)},
          {"source", r.source},
          {"candidates_scanned", r.candidates_scanned},
          {"pass", r.pass()}};
}

Json to_json(const BsgConfig& cfg) {
  return {{"kappa", rational_to_json(cfg.kappa)},
          {"popularity_fraction", rational_to_json(cfg.popularity_fraction)},
          {"degree_fraction", rational_to_json(cfg.degree_fraction)},
          {"pair_fraction", rational_to_json(cfg.pair_fraction)},
          {"schedule_steps", cfg.schedule_steps},
          {"max_candidates", cfg.max_candidates}};
}

Json to_json(const PipelineParams& p) {
  return {{"epsilon", rational_to_json(p.epsilon)},
          {"c", rational_to_json(p.c)},
          {"delta", rational_to_json(p.delta)},
          {"max_iterations", p.max_iterations},
          {"min_ambient_size", p.min_ambient_size},
          {"min_k", p.min_k},
          {"sum_counting", to_string(p.sum_counting)},
          {"ell", p.ell_list},
          {"bsg", to_json(p.bsg)}};
}

PipelineParams params_from_json(const Json& j, PipelineParams p) {
  if (j.contains("epsilon")) p.epsilon = rational_from_json(j["epsilon"]);
  if (j.contains("c")) p.c = rational_from_json(j["c"]);
  if (j.contains("delta")) p.delta = rational_from_json(j["delta"]);
  if (j.contains("max_iterations")) p.max_iterations = j["max_iterations"].get<int>();
  if (j.contains("min_ambient_size")) p.min_ambient_size = j["min_ambient_size"].get<std::size_t>();
  if (j.contains("min_k")) p.min_k = j["min_k"].get<int>();
  if (j.contains("sum_counting")) {
    p.sum_counting = sum_counting_from_string(j["sum_counting"].get<std::string>());
  }
  if (j.contains("ell")) p.ell_list = j["ell"].get<std::vector<int>>();
  if (j.contains("bsg")) {
    const Json& b = j["bsg"];
    if (b.contains("kappa")) p.bsg.kappa = rational_from_json(b["kappa"]);
    if (b.contains("popularity_fraction")) {
      p.bsg.popularity_fraction = rational_from_json(b["popularity_fraction"]);
    }
    if (b.contains("degree_fraction")) p.bsg.degree_fraction = rational_from_json(b["degree_fraction"]);
    if (b.contains("pair_fraction")) p.bsg.pair_fraction = rational_from_json(b["pair_fraction"]);
    if (b.contains("schedule_steps")) p.bsg.schedule_steps = b["schedule_steps"].get<int>();
    if (b.contains("max_candidates")) p.bsg.max_candidates = b["max_candidates"].get<std::size_t>();
  }
  p.validate();
  return p;
}

Json to_json(const PipelineResult& r) {
  const GroupSpec& spec = r.ambient.spec();
  Json growth = Json::array();
  for (const auto& row : r.growth) {
    Json item{{"ell", row.ell},
              {"size", row.size},
              {"bound", to_json(row.bound)},
              {"unrescaled", to_json(row.unrescaled)},
              {"in_scope", row.in_scope},
              {"pass", row.bound.pass}};
    if (row.via_sigma) item["via_sigma"] = to_json(*row.via_sigma);
    growth.push_back(std::move(item));
  }
  Json out{{"status", to_string(r.status)},
           {"a_prime", to_json(r.a_prime)},
           {"w", to_json(r.w, spec)},
           {"sigma", to_json(r.sigma_set)},
           {"growth", std::move(growth)},
           {"iterations", r.iterations},
           {"final_k", r.final_k},
           {"final_delta", rational_to_json(r.final_delta)},
           {"initial_sigma_size", r.initial_sigma_size},
           {"binding_failures", r.ledger.binding_failures()},
           {"ledger", to_json(r.ledger)}};
  if (!r.halt_reason.empty()) out["halt_reason"] = r.halt_reason;
  if (r.containment) out["containment"] = to_json(*r.containment);
  return out;
}

}  // namespace hbsg
