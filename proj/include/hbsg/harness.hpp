#pragma once

#include "hbsg/json_io.hpp"
#include "hbsg/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hbsg::harness {

/// Uniform integer in [0, bound) by rejection on raw mt19937_64 output, so
/// streams agree across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// `count` distinct values from [0, range), sorted (Floyd's algorithm).
std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t range,
                                           std::uint64_t count);

struct Instance {
  std::string id;
  ElemSet ambient;
  StringSet strings;
  PipelineParams params;
  /// The instance spec with defaults and seeds filled in; generating from it
  /// again reproduces the same instance.
  Json echo;
};

/// Builds (A, S) from an instance spec:
///   group:   {"kind": "integer", "lo", "hi"} | {"kind": "cyclic", "modulus"} |
///            {"kind": "vector", "p", "d"}; default integer [-2^40, 2^40]
///   ambient: {"kind": "ap", "start", "step", "n"} |
///            {"kind": "ap-plus-noise", "n_ap", "n_noise", "window", "seed"} |
///            {"kind": "random", "n", "window", "seed"} | {"kind": "explicit", "elements"}
///   strings: {"kind": "full-product"} | {"kind": "random-deletion", "fraction", "seed"} |
///            {"kind": "sum-constrained", "targets"} |
///            {"kind": "explicit", "strings" | "deleted"}
///   k, params
/// Throws InvalidArgument for infeasible specs, including a deletion
/// fraction that would leave |S| < |A|^(k - delta).
Instance generate_instance(const Json& spec, std::uint64_t default_seed = 1);

/// The generated instance in explicit form, itself a valid instance spec.
Json materialize(const Instance& instance);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<bool> oracle;
  std::optional<std::vector<int>> ell;
  std::optional<int> max_iterations;
};

/// Instance specs after applying the sweep (cartesian product over the
/// listed delta, epsilon, c values) and the overrides.
std::vector<Json> expand_config(const Json& config, const Overrides& overrides = {});
bool oracle_enabled(const Json& config, const Overrides& overrides = {});

struct InstanceReport {
  std::string id;
  RunStatus status = RunStatus::diagnostic_halt;
  /// {"instance", "result", "oracle", "timing"}; only "timing" varies between replays.
  Json report;
  std::vector<std::string> csv_row;
};

/// Generates and runs one instance; infeasible specs become diagnostic-halt
/// reports carrying the error.
InstanceReport run_instance(const Json& spec, bool with_oracle, std::uint64_t default_seed = 1);

std::vector<std::string> csv_header(const std::vector<int>& ells);
/// Rebuilds a CSV row from a report, for the given ell columns.
std::vector<std::string> csv_row(const Json& report, const std::vector<int>& ells);
std::string csv_line(const std::vector<std::string>& fields);

struct ExperimentSummary {
  std::vector<InstanceReport> instances;
  std::vector<int> ells;
};

/// Runs every instance of the config. With a non-empty out_dir, writes
/// <out_dir>/<id>.json per instance and <out_dir>/summary.csv.
ExperimentSummary run_experiment(const Json& config, const std::string& out_dir,
                                 const Overrides& overrides = {});

/// File-name-safe version of an instance id.
std::string file_stem(const std::string& id);

}  // namespace hbsg::harness
