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

#ifndef TRIGGERFORGE_CORPUS_HPP_
#define TRIGGERFORGE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "triggerforge/insertion.hpp"
#include "triggerforge/packaging.hpp"
#include "triggerforge/payload.hpp"

namespace triggerforge {

/// One ground-truth row. Field order is the CSV column order.
struct LabelRecord {
  std::string sha256_original_app;
  std::string class_infected;  // dotted
  ComponentType component_type = ComponentType::kOther;
  std::string method_infected;  // see FormatMethodInfected
  TriggerType trigger_type = TriggerType::kTime;
  GuardedCodeType guarded_code_type = GuardedCodeType::kReturn;
  std::vector<int> depths;  // ascending, distinct

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

enum class FailureCategory {
  kNoInsertionPoint,
  kRepackagingError,
  kApiLevelError,
  kParseError,
};

std::string_view FailureCategoryName(FailureCategory c);

struct FailureRecord {
  std::string app_id;
  FailureCategory category = FailureCategory::kParseError;
  std::string detail;

  friend bool operator==(const FailureRecord&, const FailureRecord&) = default;
};

inline constexpr std::string_view kLabelsHeader =
    "sha256_original_app,class_infected,component_type,method_infected,"
    "trigger_type,guarded_code_type,depths";
inline constexpr std::string_view kFailuresHeader = "app_id,category,detail";

/// `<ret> <name>(<raw params>)`, e.g. `V onCreate(Landroid/os/Bundle;)`.
/// Parameters are concatenated raw descriptors, so the field has no commas.
std::string FormatMethodInfected(const MethodSig& sig);
/// Inverse of FormatMethodInfected for a method of class `owner`.
MethodSig ParseMethodInfected(std::string_view text,
                              const TypeDescriptor& owner);

std::string FormatLabels(const std::vector<LabelRecord>& records);
/// Throws Error{kSchemaMismatch} on a wrong header, column count or value.
std::vector<LabelRecord> ParseLabels(std::string_view csv);
void WriteLabels(const std::filesystem::path& path,
                 const std::vector<LabelRecord>& records);
std::vector<LabelRecord> ReadLabels(const std::filesystem::path& path);

std::string FormatFailures(const std::vector<FailureRecord>& records);
std::vector<FailureRecord> ParseFailures(std::string_view csv);

struct InfectResult {
  std::variant<LabelRecord, FailureRecord> outcome;
  std::optional<IntegrityRecord> integrity;
  std::vector<std::string> warnings;

  bool ok() const { return std::holds_alternative<LabelRecord>(outcome); }
};

struct InfectOptions {
  /// When set, receives the `caller -> callee` edge dump of the input app.
  std::optional<std::filesystem::path> dump_callgraph;
};

/// Runs the whole pipeline on one app. Failures are returned, never thrown.
InfectResult InfectOne(const std::filesystem::path& app_dir, TriggerType t,
                       GuardedCodeType g, std::uint64_t seed,
                       const std::filesystem::path& out_dir,
                       const InfectOptions& options = {});

struct BatchItem {
  std::string app_id;  // directory name
  TriggerType trigger;
  GuardedCodeType guarded;
  std::uint64_t seed;
};

/// Apps under `apps_dir` sorted by name, each with its (trigger, guarded,
/// seed) draw from MixSeeds(master_seed, StableHash(name)).
std::vector<BatchItem> PlanBatch(const std::filesystem::path& apps_dir,
                                 std::uint64_t master_seed);

struct BatchResult {
  std::vector<LabelRecord> labels;
  std::vector<FailureRecord> failures;
  std::vector<std::pair<std::string, IntegrityRecord>> integrity;
};

/// OpenMP-parallel over apps; infected bundles go to out_root/apps/<id>.
/// Results are merged in app-name order, so output equals BatchSerial's.
BatchResult Batch(const std::filesystem::path& apps_dir,
                  std::uint64_t master_seed,
                  const std::filesystem::path& out_root, int jobs);

/// Single-threaded reference for Batch.
BatchResult BatchSerial(const std::filesystem::path& apps_dir,
                        std::uint64_t master_seed,
                        const std::filesystem::path& out_root);

/// `app_id,sha256_original,sha256_infected,finalized_at`.
std::string FormatIntegrity(
    const std::vector<std::pair<std::string, IntegrityRecord>>& rows);

struct CorpusStats {
  std::size_t total = 0;
  std::map<TriggerType, int> per_trigger;
  std::map<GuardedCodeType, int> per_guarded;
  std::map<std::pair<TriggerType, GuardedCodeType>, int> combinations;
  int malicious = 0;
  int benign = 0;
  /// Minimum depth of each record -> number of records.
  std::map<int, int> depth_histogram;
  std::map<ComponentType, int> components;
};

CorpusStats ComputeStats(const std::vector<LabelRecord>& records);
/// `depth,count`, ascending depth.
std::string FormatDepthsCsv(const CorpusStats& stats);
/// `trigger_type,guarded_code_type,count` in type-table order, nonzero only.
std::string FormatTypesCsv(const CorpusStats& stats);
std::string FormatStatsSummary(const CorpusStats& stats);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;  // bomb_class, callsite, permissions,
                                        // native_stubs
  bool ok() const;
  const ValidationCheck* Find(std::string_view name) const;
};

/// Structural checks of an infected bundle against its label. With
/// `original_dir`, the permission check requires the added permissions to
/// be exactly the payload's; without it, only that they are all present.
ValidationReport Validate(
    const std::filesystem::path& infected_dir, const LabelRecord& record,
    const std::optional<std::filesystem::path>& original_dir = std::nullopt);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_CORPUS_HPP_
