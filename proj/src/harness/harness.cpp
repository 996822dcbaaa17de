#include "hbsg/harness.hpp"

#include "hbsg/errors.hpp"
#include "hbsg/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace hbsg::harness {

namespace {

constexpr std::int64_t kDefaultWindow = std::int64_t{1} << 40;
constexpr std::size_t kOracleSubsetGround = 12;

std::uint64_t window_or_order(const GroupSpec& spec, const Json& j) {
  if (j.contains("window")) return j["window"].get<std::uint64_t>();
  if (auto order = spec.order()) return *order;
  throw InvalidArgument("random ambient sets over the integers need a window");
}

std::vector<std::int64_t> ap_values(const Json& j, std::size_t n) {
  const std::int64_t start = j.value("start", std::int64_t{0});
  const std::int64_t step = j.value("step", std::int64_t{1});
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<std::int64_t>(i) * step);
  return out;
}

ElemSet build_ambient(const GroupSpec& spec, Json& j, std::uint64_t default_seed) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") return elem_set_from_json(spec, j.at("elements"));

  std::vector<std::int64_t> raw;
  std::size_t expected = 0;
  if (kind == "ap") {
    expected = j.at("n").get<std::size_t>();
    raw = ap_values(j, expected);
  } else if (kind == "random" || kind == "ap-plus-noise") {
    if (!j.contains("seed")) j["seed"] = default_seed;
    std::mt19937_64 rng(j["seed"].get<std::uint64_t>());
    const std::uint64_t window = window_or_order(spec, j);
    if (kind == "random") {
      expected = j.at("n").get<std::size_t>();
      for (std::uint64_t v : sample_distinct(rng, window, expected)) {
        raw.push_back(static_cast<std::int64_t>(v));
      }
    } else {
      const std::size_t n_ap = j.at("n_ap").get<std::size_t>();
      const std::size_t n_noise = j.at("n_noise").get<std::size_t>();
      expected = n_ap + n_noise;
      raw = ap_values(j, n_ap);
      std::set<std::int64_t> taken;
      for (std::int64_t v : raw) taken.insert(spec.element(v).value);
      if (window < expected) throw InvalidArgument("noise window too small");
      std::size_t added = 0;
      for (std::uint64_t attempts = 0; added < n_noise; ++attempts) {
        if (attempts > 64 * (n_noise + 1) + window) throw InvalidArgument("noise sampling failed");
        const auto v = static_cast<std::int64_t>(uniform_below(rng, window));
        if (taken.insert(spec.element(v).value).second) {
          raw.push_back(v);
          ++added;
        }
      }
    }
  } else {
    throw InvalidArgument("unknown ambient kind " + kind);
  }
  ElemSet out = ElemSet::from_values(spec, raw);
  if (out.size() != expected) {
    throw InvalidArgument("ambient generator produced " + std::to_string(out.size()) +
                          " distinct elements, expected " + std::to_string(expected));
  }
  return out;
}

StringSet build_strings(const ElemSet& a, int k, Json& j, const PipelineParams& params,
                        std::uint64_t default_seed) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "full-product") return StringSet::full(a, k);
  if (kind == "explicit") {
    Json copy = j;
    copy["k"] = k;
    return string_set_from_json(a, copy);
  }
  const StringSet universe = StringSet::full(a, k);
  const std::uint64_t total = universe.universe();
  if (kind == "random-deletion") {
    if (!j.contains("seed")) j["seed"] = default_seed;
    const Rational fraction = rational_from_json(j.at("fraction"));
    if (fraction < 0 || fraction >= 1) throw InvalidArgument("deletion fraction must lie in [0, 1)");
    const Rational scaled = fraction * Rational(total);
    const BigInt floor_count = numerator(scaled) / denominator(scaled);
    const auto count = static_cast<std::uint64_t>(floor_count);
    PowerProduct kept(Rational(total - count));
    PowerProduct needed(1);
    needed.times(a.size(), Rational(k) - params.delta);
    if (compare(kept, needed).order < 0) {
      throw InvalidArgument("deletion fraction too large: |S| would fall below |A|^(k - delta)");
    }
    std::mt19937_64 rng(j["seed"].get<std::uint64_t>());
    auto deleted = sample_distinct(rng, total, count);
    return StringSet::from_codes(a, k, std::vector<StringCode>(deleted.begin(), deleted.end()),
                                 StringSet::Form::complement)
        .normalized();
  }
  if (kind == "sum-constrained") {
    const GroupSpec& spec = a.spec();
    std::set<GroupElem> targets;
    for (const auto& t : j.at("targets")) targets.insert(element_from_json(spec, t));
    if (total > StringSet::kMaterializeLimit) throw BudgetExceeded("A^k too large to filter");
    std::vector<StringCode> kept;
    for (StringCode c = 0; c < total; ++c) {
      if (targets.count(sigma_string(spec, universe.decode(c)))) kept.push_back(c);
    }
    return StringSet::from_codes(a, k, std::move(kept), StringSet::Form::explicit_list).normalized();
  }
  throw InvalidArgument("unknown strings kind " + kind);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string decimal(const Json& rational_field) {
  return format_double(to_double(rational_from_json(rational_field)));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json oracle_section(const Instance& inst, const PipelineResult& result) {
  Json out;
  try {
    auto audit = oracle::audit_ledger(result.ledger, result.store);
    Json issues = Json::array();
    for (const auto& i : audit.issues) issues.push_back({{"entry", i.entry}, {"what", i.what}});
    out["audit"] = {{"entries", audit.entries},
                    {"factors_checked", audit.factors_checked},
                    {"factors_given", audit.factors_skipped},
                    {"relations_checked", audit.relations_checked},
                    {"derivations_checked", audit.derivations_checked},
                    {"containments_checked", audit.containments_checked},
                    {"issues", std::move(issues)},
                    {"ok", audit.ok()}};
  } catch (const BudgetExceeded& e) {
    out["audit"] = {{"skipped", e.what()}};
  }

  Json growth = Json::array();
  for (const auto& row : result.growth) {
    const std::uint64_t brute = oracle::brute_iterated(result.a_prime, row.ell).size();
    Expression lhs = row.bound.lhs;
    lhs.factors.front().value = brute;
    const bool recheck = oracle::holds(oracle::compare_expressions(lhs, row.bound.rhs),
                                       row.bound.relation);
    Json item{{"ell", row.ell},
              {"pipeline_size", row.size},
              {"oracle_size", brute},
              {"sizes_agree", brute == row.size},
              {"pipeline_pass", row.bound.pass},
              {"oracle_pass", recheck},
              {"pass_agrees", recheck == row.bound.pass}};
    if (inst.ambient.size() <= kOracleSubsetGround && !result.a_prime.empty()) {
      auto best = oracle::best_subset_growth(inst.ambient, row.ell, result.a_prime.size());
      item["best_subset"] = to_json(best.best);
      item["best_subset_size"] = best.size;
      item["gap"] = static_cast<std::int64_t>(row.size) - static_cast<std::int64_t>(best.size);
    }
    growth.push_back(std::move(item));
  }
  out["growth"] = std::move(growth);
  return out;
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below needs a positive bound");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  while (true) {
    const std::uint64_t v = rng();
    if (v <= limit) return v % bound;
  }
}

std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t range,
                                           std::uint64_t count) {
  if (count > range) throw InvalidArgument("cannot sample more values than the range holds");
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = range - count; j < range; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

Instance generate_instance(const Json& spec, std::uint64_t default_seed) {
  Json echo = spec;
  const std::uint64_t seed = spec.value("seed", default_seed);
  echo["seed"] = seed;
  if (!echo.contains("id")) echo["id"] = "instance";
  if (!echo.contains("group")) {
    echo["group"] = to_json(GroupSpec::integer_window(-kDefaultWindow, kDefaultWindow));
  }
  const GroupSpec group = group_spec_from_json(echo["group"]);
  echo["group"] = to_json(group);
  const int k = echo.at("k").get<int>();
  if (k < 1) throw InvalidArgument("k must be at least 1");

  PipelineParams params = params_from_json(echo.value("params", Json::object()));
  echo["params"] = to_json(params);

  ElemSet ambient = build_ambient(group, echo.at("ambient"), seed);
  StringSet strings = build_strings(ambient, k, echo.at("strings"), params, seed);
  return Instance{echo["id"].get<std::string>(), std::move(ambient), std::move(strings),
                  std::move(params), std::move(echo)};
}

Json materialize(const Instance& instance) {
  Json strings = to_json(instance.strings);
  strings.erase("k");
  strings["kind"] = "explicit";
  Json elements = to_json(instance.ambient)["elements"];
  return {{"id", instance.id},
          {"group", to_json(instance.ambient.spec())},
          {"ambient", {{"kind", "explicit"}, {"elements", std::move(elements)}}},
          {"strings", std::move(strings)},
          {"k", instance.strings.length()},
          {"params", to_json(instance.params)}};
}

std::vector<Json> expand_config(const Json& config, const Overrides& overrides) {
  const std::uint64_t seed = overrides.seed.value_or(config.value("seed", std::uint64_t{1}));
  const Json sweep = config.value("sweep", Json::object());
  std::vector<Json> out;
  std::size_t index = 0;
  for (Json base : config.at("instances")) {
    if (!base.contains("id")) base["id"] = "instance-" + std::to_string(index);
    ++index;
    if (!base.contains("seed")) base["seed"] = seed;
    if (overrides.seed) base["seed"] = *overrides.seed;
    Json& params = base["params"];
    if (params.is_null()) params = Json::object();
    if (config.contains("ell") && !params.contains("ell")) params["ell"] = config["ell"];
    if (config.contains("max_iterations") && !params.contains("max_iterations")) {
      params["max_iterations"] = config["max_iterations"];
    }
    if (overrides.ell) params["ell"] = *overrides.ell;
    if (overrides.max_iterations) params["max_iterations"] = *overrides.max_iterations;

    std::vector<Json> variants{base};
    for (const char* field : {"delta", "epsilon", "c"}) {
      if (!sweep.contains(field)) continue;
      std::vector<Json> next;
      for (const auto& v : variants) {
        for (const auto& value : sweep[field]) {
          Json copy = v;
          copy["params"][field] = value;
          const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
          copy["id"] = copy["id"].get<std::string>() + "/" + field + "=" + text;
          next.push_back(std::move(copy));
        }
      }
      variants = std::move(next);
    }
    for (auto& v : variants) out.push_back(std::move(v));
  }
  return out;
}

bool oracle_enabled(const Json& config, const Overrides& overrides) {
  if (overrides.oracle) return *overrides.oracle;
  if (!config.contains("oracle")) return false;
  const Json& o = config["oracle"];
  if (o.is_boolean()) return o.get<bool>();
  return o.get<std::string>() == "on";
}

std::vector<std::string> csv_header(const std::vector<int>& ells) {
  std::vector<std::string> out{"instance_id", "A_size", "k",          "delta",
                               "epsilon",     "c",      "sigma_size", "iterations",
                               "A_prime_size"};
  for (int ell : ells) {
    const std::string p = "ell" + std::to_string(ell);
    out.push_back(p + "_size");
    out.push_back(p + "_bound");
    out.push_back(p + "_pass");
  }
  out.push_back("status");
  out.push_back("wall_ms");
  return out;
}

std::vector<std::string> csv_row(const Json& report, const std::vector<int>& ells) {
  const Json& inst = report.at("instance");
  const Json& summary = report.at("summary");
  const Json& params = inst.at("params");
  std::vector<std::string> out{inst.at("id").get<std::string>(),
                               std::to_string(summary.value("A_size", 0)),
                               std::to_string(inst.value("k", 0)),
                               decimal(params.at("delta")),
                               decimal(params.at("epsilon")),
                               decimal(params.at("c")),
                               std::to_string(summary.value("sigma_size", 0)),
                               std::to_string(summary.value("iterations", 0)),
                               std::to_string(summary.value("A_prime_size", 0))};
  const Json growth = report.contains("result") ? report["result"].value("growth", Json::array())
                                                : Json::array();
  for (int ell : ells) {
    auto it = std::find_if(growth.begin(), growth.end(),
                           [&](const Json& g) { return g.at("ell").get<int>() == ell; });
    if (it == growth.end()) {
      out.insert(out.end(), {"", "", ""});
      continue;
    }
    out.push_back(std::to_string(it->at("size").get<std::uint64_t>()));
    out.push_back(format_double(it->at("bound").at("rhs_approx").get<double>()));
    out.push_back(it->at("pass").get<bool>() ? "true" : "false");
  }
  out.push_back(summary.at("status").get<std::string>());
  out.push_back(format_double(report.at("timing").at("wall_ms").get<double>()));
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out;
}

InstanceReport run_instance(const Json& spec, bool with_oracle, std::uint64_t default_seed) {
  const auto started = std::chrono::steady_clock::now();
  InstanceReport out;
  out.id = spec.value("id", std::string("instance"));
  Json report;
  report["instance"] = spec;
  try {
    Instance inst = generate_instance(spec, default_seed);
    report["instance"] = inst.echo;
    PipelineResult result = run_pipeline(inst.ambient, inst.strings, inst.params);
    out.status = result.status;
    report["result"] = to_json(result);
    report["summary"] = {{"A_size", inst.ambient.size()},
                         {"S_size", inst.strings.size()},
                         {"sigma_size", result.initial_sigma_size},
                         {"iterations", result.iterations},
                         {"A_prime_size", result.a_prime.size()},
                         {"status", to_string(result.status)}};
    if (with_oracle) report["oracle"] = oracle_section(inst, result);
  } catch (const Error& e) {
    out.status = RunStatus::diagnostic_halt;
    report["error"] = e.what();
    report["summary"] = {{"status", to_string(RunStatus::diagnostic_halt)}};
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  report["timing"] = {{"wall_ms", wall_ms}};
  out.report = std::move(report);
  return out;
}

std::string file_stem(const std::string& id) {
  std::string out = id;
  for (char& ch : out) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ||
                      ch == '.' || ch == '=';
    if (!keep) ch = '_';
  }
  return out;
}

ExperimentSummary run_experiment(const Json& config, const std::string& out_dir,
                                 const Overrides& overrides) {
  const auto specs = expand_config(config, overrides);
  const bool with_oracle = oracle_enabled(config, overrides);
  ExperimentSummary summary;
  std::set<int> ells;
  for (const auto& spec : specs) {
    for (int ell : params_from_json(spec.value("params", Json::object())).ell_list) {
      ells.insert(ell);
    }
  }
  summary.ells.assign(ells.begin(), ells.end());

  for (const auto& spec : specs) {
    InstanceReport r = run_instance(spec, with_oracle);
    r.csv_row = csv_row(r.report, summary.ells);
    summary.instances.push_back(std::move(r));
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (const auto& r : summary.instances) {
      std::ofstream f(std::filesystem::path(out_dir) / (file_stem(r.id) + ".json"));
      if (!f) throw Error("cannot write report for " + r.id);
      f << r.report.dump(2) << "\n";
    }
    std::ofstream csv(std::filesystem::path(out_dir) / "summary.csv");
    if (!csv) throw Error("cannot write summary.csv");
    csv << csv_line(csv_header(summary.ells)) << "\n";
    for (const auto& r : summary.instances) csv << csv_line(r.csv_row) << "\n";
  }
  return summary;
}

}  // namespace hbsg::harness
