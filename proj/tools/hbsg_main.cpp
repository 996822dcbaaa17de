// hbsg: generate instances, run extraction sweeps, verify and summarize reports.
#include "hbsg/errors.hpp"
#include "hbsg/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using hbsg::Json;
using namespace hbsg::harness;

namespace {

constexpr int kExitProved = 0;
constexpr int kExitError = 1;
constexpr int kExitBestEffort = 2;
constexpr int kExitHalt = 3;

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw hbsg::Error("cannot open " + path);
  return Json::parse(f);
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw hbsg::Error("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

std::vector<int> parse_ells(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stoi(part));
  }
  if (out.empty()) throw hbsg::InvalidArgument("--ell needs at least one value");
  return out;
}

int exit_code(const std::vector<hbsg::RunStatus>& statuses) {
  int code = kExitProved;
  for (auto s : statuses) {
    if (s == hbsg::RunStatus::diagnostic_halt) return kExitHalt;
    if (s == hbsg::RunStatus::best_effort) code = kExitBestEffort;
  }
  return code;
}

struct CommonFlags {
  std::string config;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string oracle;
  std::string ell;
  std::optional<int> max_iters;

  Overrides overrides() const {
    Overrides o;
    o.seed = seed;
    if (!oracle.empty()) o.oracle = oracle == "on";
    if (!ell.empty()) o.ell = parse_ells(ell);
    o.max_iterations = max_iters;
    return o;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON experiment config")->required()->check(
      CLI::ExistingFile);
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
  cmd->add_option("--seed", flags.seed, "Default seed for generators without one");
  cmd->add_option("--oracle", flags.oracle, "Run oracle comparisons")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--ell", flags.ell, "Growth table ells, e.g. 2,3,4");
  cmd->add_option("--max-iters", flags.max_iters, "Iteration cap");
}

int cmd_gen(const CommonFlags& flags) {
  const Json config = read_json(flags.config);
  fs::create_directories(flags.out_dir);
  int written = 0;
  for (const auto& spec : expand_config(config, flags.overrides())) {
    Instance inst = generate_instance(spec);
    const fs::path path = fs::path(flags.out_dir) / (file_stem(inst.id) + ".instance.json");
    write_json(path, {{"spec", inst.echo}, {"materialized", materialize(inst)}});
    std::cout << inst.id << ": |A|=" << inst.ambient.size() << " k=" << inst.strings.length()
              << " |S|=" << inst.strings.size() << " -> " << path.string() << "\n";
    ++written;
  }
  std::cout << written << " instance(s)\n";
  return kExitProved;
}

int cmd_run(const CommonFlags& flags) {
  const Json config = read_json(flags.config);
  const auto summary = run_experiment(config, flags.out_dir, flags.overrides());
  std::vector<hbsg::RunStatus> statuses;
  std::cout << csv_line(csv_header(summary.ells)) << "\n";
  for (const auto& r : summary.instances) {
    std::cout << csv_line(r.csv_row) << "\n";
    statuses.push_back(r.status);
  }
  std::cerr << "reports in " << flags.out_dir << "\n";
  return exit_code(statuses);
}

int cmd_verify(const std::string& report_path) {
  const Json stored = read_json(report_path);
  const Json& echo = stored.at("instance");
  InstanceReport rerun = run_instance(echo, true);
  bool ok = true;

  const bool stored_ran = stored.contains("result");
  if (stored_ran != rerun.report.contains("result")) {
    std::cout << "replay: outcome differs (one run raised an error)\n";
    ok = false;
  } else if (stored_ran) {
    const bool same = stored["result"]["ledger"].dump() == rerun.report["result"]["ledger"].dump();
    const bool same_result = stored["result"].dump() == rerun.report["result"].dump();
    std::cout << "replay ledger: " << (same ? "identical" : "DIFFERS") << "\n";
    std::cout << "replay result: " << (same_result ? "identical" : "DIFFERS") << "\n";
    ok = ok && same && same_result;
  } else {
    std::cout << "replay: both runs rejected the instance: " << rerun.report.value("error", "")
              << "\n";
  }

  if (rerun.report.contains("oracle")) {
    const Json& oracle = rerun.report["oracle"];
    const Json& audit = oracle["audit"];
    if (audit.contains("skipped")) {
      std::cout << "audit: skipped (" << audit["skipped"].get<std::string>() << ")\n";
    } else {
      std::cout << "audit: " << audit["entries"] << " entries, " << audit["factors_checked"]
                << " factors, " << audit["relations_checked"] << " relations, "
                << audit["derivations_checked"] << " derivations, "
                << audit["containments_checked"] << " containments, "
                << audit["issues"].size() << " issue(s)\n";
      for (const auto& issue : audit["issues"]) {
        std::cout << "  entry " << issue["entry"] << ": " << issue["what"].get<std::string>()
                  << "\n";
      }
      ok = ok && audit["ok"].get<bool>();
    }
    for (const auto& g : oracle["growth"]) {
      const bool agree = g["sizes_agree"].get<bool>() && g["pass_agrees"].get<bool>();
      std::cout << "growth ell=" << g["ell"] << ": " << (agree ? "agrees" : "DISAGREES") << "\n";
      ok = ok && agree;
    }
  }
  std::cout << (ok ? "verified" : "verification failed") << "\n";
  return ok ? kExitProved : kExitError;
}

int cmd_report(const std::string& dir, const std::string& ell_text) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" && name.find(".instance.") == std::string::npos) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Json> reports;
  std::set<int> ells;
  for (const auto& f : files) {
    Json r = read_json(f.string());
    if (!r.contains("instance") || !r.contains("summary")) continue;
    if (r.contains("result")) {
      for (const auto& g : r["result"]["growth"]) ells.insert(g["ell"].get<int>());
    }
    reports.push_back(std::move(r));
  }
  std::vector<int> columns(ells.begin(), ells.end());
  if (!ell_text.empty()) columns = parse_ells(ell_text);

  std::ofstream csv(fs::path(dir) / "summary.csv");
  if (!csv) throw hbsg::Error("cannot write summary.csv");
  const std::string header = csv_line(csv_header(columns));
  csv << header << "\n";
  std::cout << header << "\n";
  std::vector<hbsg::RunStatus> statuses;
  for (const auto& r : reports) {
    const std::string line = csv_line(csv_row(r, columns));
    csv << line << "\n";
    std::cout << line << "\n";
    const std::string status = r["summary"]["status"].get<std::string>();
    statuses.push_back(status == "proved-at-scale" ? hbsg::RunStatus::proved_at_scale
                       : status == "best-effort"   ? hbsg::RunStatus::best_effort
                                                   : hbsg::RunStatus::diagnostic_halt);
  }
  return exit_code(statuses);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive sumset extraction from dense string sets"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags;
  auto* gen = app.add_subcommand("gen", "Generate instances and write them in explicit form");
  add_common(gen, gen_flags);
  auto* run = app.add_subcommand("run", "Run every instance of a config");
  add_common(run, run_flags);

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Replay a report from its echo and audit it");
  verify->add_option("report", report_path, "Report JSON")->required()->check(CLI::ExistingFile);

  std::string report_dir, report_ells;
  auto* report = app.add_subcommand("report", "Rebuild summary.csv from a report directory");
  report->add_option("--out-dir", report_dir, "Directory of report JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--ell", report_ells, "Growth columns, e.g. 2,3,4");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_flags);
    if (*run) return cmd_run(run_flags);
    if (*verify) return cmd_verify(report_path);
    if (*report) return cmd_report(report_dir, report_ells);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
