// Copyright 2026 The TriggerForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: infect, batch, validate, stats, detect, score,
// list-types, plus --list-triggers and --list-guarded.
// Exit codes: 0 success, 1 operational failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "triggerforge/corpus.hpp"
#include "triggerforge/error.hpp"
#include "triggerforge/eval.hpp"
#include "triggerforge/payload.hpp"

namespace fs = std::filesystem;
namespace tf = triggerforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int g_verbosity = 0;

void Log(int level, const std::string& msg) {
  if (g_verbosity >= level) std::cerr << msg << '\n';
}

std::vector<std::string> TriggerNames() {
  std::vector<std::string> out;
  for (const auto& t : tf::AllTriggers()) out.emplace_back(t.name);
  return out;
}

std::vector<std::string> GuardedNames() {
  std::vector<std::string> out;
  for (const auto& g : tf::AllGuarded()) out.emplace_back(g.name);
  return out;
}

std::string Vocabulary() {
  std::string out = "\nTrigger types (--trigger):\n";
  for (const auto& t : tf::AllTriggers()) {
    out += "  " + std::string(t.name) + "  " + std::string(t.description) + "\n";
  }
  out += "\nGuarded code types (--guarded), * = malicious:\n";
  for (const auto& g : tf::AllGuarded()) {
    out += "  " + std::string(g.name) + (g.malicious ? " *  " : "    ") +
           std::string(g.description) + "\n";
  }
  return out;
}

// Tab-separated, one type per line.
void PrintTriggerTable() {
  for (const auto& t : tf::AllTriggers()) {
    std::cout << t.name << '\t' << t.description << '\n';
  }
}

void PrintGuardedTable() {
  for (const auto& g : tf::AllGuarded()) {
    std::cout << g.name << '\t' << (g.malicious ? "malicious" : "benign") << '\t'
              << g.description << '\n';
  }
}

void PrintFailure(const tf::FailureRecord& f) {
  std::cerr << "infection failed: " << tf::FailureCategoryName(f.category)
            << ": " << f.detail << '\n';
}

struct InfectArgs {
  std::string app, trigger, guarded, out;
  std::uint64_t seed = 0;
  std::optional<std::string> label, failures, integrity, dump_cg;
};

int RunInfect(const InfectArgs& a) {
  auto t = *tf::TriggerFromName(a.trigger);
  auto g = *tf::GuardedFromName(a.guarded);
  tf::InfectOptions options;
  if (a.dump_cg) options.dump_callgraph = fs::path(*a.dump_cg);
  tf::InfectResult r = tf::InfectOne(a.app, t, g, a.seed, a.out, options);
  for (const auto& w : r.warnings) Log(1, "warning: " + w);
  if (!r.ok()) {
    const auto& f = std::get<tf::FailureRecord>(r.outcome);
    PrintFailure(f);
    if (a.failures) tf::WriteFile(*a.failures, tf::FormatFailures({f}));
    return kExitFailure;
  }
  const auto& label = std::get<tf::LabelRecord>(r.outcome);
  if (a.label) tf::WriteLabels(*a.label, {label});
  if (a.integrity && r.integrity) {
    tf::WriteFile(*a.integrity, tf::FormatIntegrity({{fs::path(a.app).filename().string(), *r.integrity}}));
  }
  Log(1, "infected " + label.class_infected + " " + label.method_infected);
  if (!a.label) std::cout << tf::FormatLabels({label});
  return kExitOk;
}

struct BatchArgs {
  std::string apps, out;
  std::optional<std::string> labels, failures, integrity;
  std::uint64_t seed = 0;
  int jobs = 0;
};

int RunBatch(const BatchArgs& a) {
  int jobs = a.jobs > 0 ? a.jobs
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  tf::BatchResult r = tf::Batch(a.apps, a.seed, a.out, jobs);
  fs::path labels = a.labels ? fs::path(*a.labels) : fs::path(a.out) / "labels.csv";
  fs::path failures =
      a.failures ? fs::path(*a.failures) : fs::path(a.out) / "failures.csv";
  tf::WriteLabels(labels, r.labels);
  tf::WriteFile(failures, tf::FormatFailures(r.failures));
  if (a.integrity) tf::WriteFile(*a.integrity, tf::FormatIntegrity(r.integrity));
  for (const auto& f : r.failures) {
    Log(1, f.app_id + ": " + std::string(tf::FailureCategoryName(f.category)) +
               ": " + f.detail);
  }
  std::cerr << r.labels.size() << " infected, " << r.failures.size()
            << " failed\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string app, label;
  std::optional<std::string> original;
  std::size_t row = 0;
};

int RunValidate(const ValidateArgs& a) {
  auto labels = tf::ReadLabels(a.label);
  if (a.row >= labels.size()) {
    std::cerr << "label file has " << labels.size() << " rows, no row "
              << a.row << '\n';
    return kExitFailure;
  }
  std::optional<fs::path> original;
  if (a.original) original = fs::path(*a.original);
  tf::ValidationReport report = tf::Validate(a.app, labels[a.row], original);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail
              << '\n';
  }
  return report.ok() ? kExitOk : kExitFailure;
}

int RunStats(const std::string& labels_path,
             const std::optional<std::string>& out_dir) {
  tf::CorpusStats s = tf::ComputeStats(tf::ReadLabels(labels_path));
  std::cout << tf::FormatStatsSummary(s);
  if (out_dir) {
    fs::create_directories(*out_dir);
    tf::WriteFile(fs::path(*out_dir) / "depths.csv", tf::FormatDepthsCsv(s));
    tf::WriteFile(fs::path(*out_dir) / "types.csv", tf::FormatTypesCsv(s));
  }
  return kExitOk;
}

int RunDetect(const std::vector<std::string>& apps,
              const std::vector<std::string>& ids,
              const std::optional<std::string>& out) {
  if (!ids.empty() && ids.size() != apps.size()) {
    std::cerr << "--app-id must be given once per --app\n";
    return kExitUsage;
  }
  std::vector<tf::Verdict> verdicts;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    tf::Verdict v = tf::BaselineDetect(fs::path(apps[i]));
    if (!ids.empty()) v.app_id = ids[i];
    Log(1, apps[i] + ": " + (v.flagged ? "flagged" : "clean"));
    verdicts.push_back(std::move(v));
  }
  std::string csv = tf::FormatVerdicts(verdicts);
  if (out) {
    tf::WriteFile(*out, csv);
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

int RunScore(const std::string& labels, const std::string& verdicts,
             const std::optional<std::string>& out) {
  tf::Metrics m = tf::Score(tf::ReadLabels(labels),
                            tf::ParseVerdicts(tf::ReadFile(verdicts)));
  std::cout << tf::FormatMetricsTable(m);
  if (out) tf::WriteFile(*out, tf::FormatMetricsCsv(m));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infects disassembled Android app bundles with labeled "
               "trigger-based behaviors and scores detectors against the "
               "labels."};
  app.footer(Vocabulary());
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.add_flag("-v,--verbose", g_verbosity, "Increase diagnostics (-vv for more)");
  bool list_triggers = false;
  bool list_guarded = false;
  app.add_flag("--list-triggers", list_triggers,
               "Print trigger types as name<TAB>description");
  app.add_flag("--list-guarded", list_guarded,
               "Print guarded code types as name<TAB>malicious|benign<TAB>description");

  const auto trigger_names = TriggerNames();
  const auto guarded_names = GuardedNames();
  auto seed_option = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "RNG seed (default 0)")
        ->envname("TRIGGERFORGE_SEED");
  };

  InfectArgs infect;
  auto* infect_cmd = app.add_subcommand("infect", "Infect one app");
  infect_cmd->footer(Vocabulary());
  infect_cmd->add_option("--app", infect.app, "Input bundle directory")
      ->required()->check(CLI::ExistingDirectory);
  infect_cmd->add_option("--trigger", infect.trigger, "Trigger type")
      ->required()->check(CLI::IsMember(trigger_names));
  infect_cmd->add_option("--guarded", infect.guarded, "Guarded code type")
      ->required()->check(CLI::IsMember(guarded_names));
  seed_option(infect_cmd, infect.seed);
  infect_cmd->add_option("--out", infect.out, "Output bundle directory (absent or empty)")
      ->required();
  infect_cmd->add_option("--label", infect.label, "Write the label row here");
  infect_cmd->add_option("--failures", infect.failures, "Write the failure row here");
  infect_cmd->add_option("--integrity", infect.integrity, "Write the integrity record here");
  infect_cmd->add_option("--dump-cg", infect.dump_cg, "Write callgraph edges here");

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Infect every app under a directory");
  batch_cmd->footer(Vocabulary());
  batch_cmd->add_option("--apps", batch.apps, "Directory of bundle directories")
      ->required()->check(CLI::ExistingDirectory);
  batch_cmd->add_option("--out", batch.out, "Output root")->required();
  batch_cmd->add_option("--labels", batch.labels, "labels.csv path (default <out>/labels.csv)");
  batch_cmd->add_option("--failures", batch.failures, "failures.csv path (default <out>/failures.csv)");
  batch_cmd->add_option("--integrity", batch.integrity, "Write integrity records here");
  seed_option(batch_cmd, batch.seed);
  batch_cmd->add_option("--jobs", batch.jobs, "Worker threads (default: all processors)")
      ->check(CLI::NonNegativeNumber);

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Structurally check an infected app");
  validate_cmd->footer(Vocabulary());
  validate_cmd->add_option("--app", validate.app, "Infected bundle directory")
      ->required()->check(CLI::ExistingDirectory);
  validate_cmd->add_option("--label", validate.label, "labels.csv")
      ->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--row", validate.row, "Row of the labels file (default 0)");
  validate_cmd->add_option("--original", validate.original,
                           "Original bundle; makes the permission check exact")
      ->check(CLI::ExistingDirectory);

  std::string stats_labels;
  std::optional<std::string> stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a labels file");
  stats_cmd->footer(Vocabulary());
  stats_cmd->add_option("--labels", stats_labels, "labels.csv")
      ->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--out-dir", stats_out, "Write depths.csv and types.csv here");

  std::vector<std::string> detect_apps, detect_ids;
  std::optional<std::string> detect_out;
  auto* detect_cmd = app.add_subcommand("detect", "Run the baseline detector");
  detect_cmd->footer(Vocabulary());
  detect_cmd->add_option("--app", detect_apps, "Bundle directory (repeatable)")
      ->required();
  detect_cmd->add_option("--app-id", detect_ids,
                         "Verdict id per --app (default: bundle digest)");
  detect_cmd->add_option("--out", detect_out, "verdicts.csv (default stdout)");

  std::string score_labels, score_verdicts;
  std::optional<std::string> score_out;
  auto* score_cmd = app.add_subcommand("score", "Score verdicts against labels");
  score_cmd->footer(Vocabulary());
  score_cmd->add_option("--labels", score_labels, "labels.csv")
      ->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--verdicts", score_verdicts, "verdicts.csv")
      ->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--out", score_out, "Write metrics.csv here");

  auto* list_cmd = app.add_subcommand("list-types", "Print the type vocabularies");
  list_cmd->footer(Vocabulary());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list_triggers || list_guarded) {
    if (list_triggers) PrintTriggerTable();
    if (list_guarded) PrintGuardedTable();
    if (app.get_subcommands().empty()) return kExitOk;
  } else if (app.get_subcommands().empty()) {
    std::cerr << app.help() << "A subcommand is required\n";
    return kExitUsage;
  }

  try {
    if (*infect_cmd) return RunInfect(infect);
    if (*batch_cmd) return RunBatch(batch);
    if (*validate_cmd) return RunValidate(validate);
    if (*stats_cmd) return RunStats(stats_labels, stats_out);
    if (*detect_cmd) return RunDetect(detect_apps, detect_ids, detect_out);
    if (*score_cmd) return RunScore(score_labels, score_verdicts, score_out);
    if (*list_cmd) {
      std::cout << Vocabulary();
      return kExitOk;
    }
  } catch (const tf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
