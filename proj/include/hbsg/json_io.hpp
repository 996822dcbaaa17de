#pragma once

#include "hbsg/bsg.hpp"
#include "hbsg/certificate.hpp"
#include "hbsg/group.hpp"
#include "hbsg/pipeline.hpp"
#include "hbsg/selection.hpp"
#include "hbsg/strings.hpp"
#include "hbsg/sumset.hpp"

#include <json.hpp>

namespace hbsg {

using Json = nlohmann::json;

/// Integers that fit in int64 become JSON numbers, larger ones strings.
Json big_to_json(const BigInt& value);
BigInt big_from_json(const Json& j);
/// Rationals are written as "p/q" (or "p"); numbers and decimal strings are
/// accepted on input and converted exactly.
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j);

Json to_json(const GroupSpec& spec);
GroupSpec group_spec_from_json(const Json& j);

/// Vector-space elements are coordinate arrays, everything else integers.
Json element_to_json(const GroupSpec& spec, GroupElem e);
GroupElem element_from_json(const GroupSpec& spec, const Json& j);

Json to_json(const ElemSet& set);
ElemSet elem_set_from_json(const Json& j);
/// Elements only, for a known group.
ElemSet elem_set_from_json(const GroupSpec& spec, const Json& elements);

Json to_json(const AString& s, const GroupSpec& spec);
AString string_from_json(const GroupSpec& spec, const Json& j);

/// {"k", "strings"} for the explicit form, {"k", "deleted"} for the complement.
Json to_json(const StringSet& s);
StringSet string_set_from_json(const ElemSet& ambient, const Json& j);

Json to_json(const BipartiteGraph& g);
BipartiteGraph graph_from_json(const Json& j);

Json to_json(const Expression& e);
Json to_json(const Certificate& c);
Json to_json(const Containment& c);
Json to_json(const LedgerEntry& e);
Json to_json(const CertificateLedger& ledger);

Json to_json(const PlunneckeReport& r);
Json to_json(const RuzsaReport& r);
Json to_json(const SelectionCert& c);
Json to_json(const BsgResult& r);
Json to_json(const BsgConfig& cfg);
Json to_json(const PipelineParams& p);
/// Missing fields keep their defaults.
PipelineParams params_from_json(const Json& j, PipelineParams base = {});
/// Everything except the set store.
Json to_json(const PipelineResult& r);

}  // namespace hbsg
