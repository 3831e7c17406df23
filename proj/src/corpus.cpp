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

#include "triggerforge/corpus.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <charconv>
#include <system_error>

#include "csv.hpp"
#include "triggerforge/callgraph.hpp"
#include "triggerforge/error.hpp"

namespace triggerforge {
namespace fs = std::filesystem;
namespace {

std::string JoinDepths(const std::vector<int>& depths) {
  std::string out;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(depths[i]);
  }
  return out;
}

std::vector<int> ParseDepths(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) {
    throw Error(ErrorKind::kSchemaMismatch, "empty depths field");
  }
  for (;;) {
    std::size_t semi = text.find(';');
    std::string_view part = text.substr(0, semi);
    int value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || value < 0) {
      throw Error(ErrorKind::kSchemaMismatch,
                  "bad depth '" + std::string(part) + "'");
    }
    out.push_back(value);
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return out;
}

FailureRecord Failure(const fs::path& app_dir, FailureCategory category,
                      const std::string& detail) {
  return {app_dir.filename().string(), category, internal::SanitizeField(detail)};
}

// Drops the "Kind: " prefix when it only repeats the category name.
std::string Detail(const Error& e, FailureCategory category) {
  std::string what = e.what();
  std::string prefix = std::string(FailureCategoryName(category)) + ": ";
  return what.starts_with(prefix) ? what.substr(prefix.size()) : what;
}

BatchResult Merge(const std::vector<BatchItem>& plan,
                  std::vector<InfectResult>& results) {
  BatchResult out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    InfectResult& r = results[i];
    if (auto* label = std::get_if<LabelRecord>(&r.outcome)) {
      out.labels.push_back(std::move(*label));
    } else {
      out.failures.push_back(std::get<FailureRecord>(std::move(r.outcome)));
    }
    if (r.integrity) out.integrity.emplace_back(plan[i].app_id, *r.integrity);
  }
  return out;
}

void PrepareOutRoot(const fs::path& out_root) {
  std::error_code ec;
  fs::create_directories(out_root / "apps", ec);
  if (ec) {
    throw Error(ErrorKind::kIoFailure,
                "cannot create " + (out_root / "apps").string() + ": " +
                    ec.message());
  }
}

}  // namespace

std::string_view FailureCategoryName(FailureCategory c) {
  switch (c) {
    case FailureCategory::kNoInsertionPoint: return "NoInsertionPoint";
    case FailureCategory::kRepackagingError: return "RepackagingError";
    case FailureCategory::kApiLevelError: return "ApiLevelError";
    case FailureCategory::kParseError: return "ParseError";
  }
  return "ParseError";
}

std::string FormatMethodInfected(const MethodSig& sig) {
  return sig.ret.raw() + " " + sig.name + "(" + sig.raw_params() + ")";
}

MethodSig ParseMethodInfected(std::string_view text,
                              const TypeDescriptor& owner) {
  std::size_t space = text.find(' ');
  std::size_t open = text.find('(');
  if (space == std::string_view::npos || open == std::string_view::npos ||
      open < space || !text.ends_with(')')) {
    throw Error(ErrorKind::kSchemaMismatch,
                "bad method_infected '" + std::string(text) + "'");
  }
  try {
    MethodSig sig;
    sig.owner = owner;
    sig.ret = TypeDescriptor::Parse(text.substr(0, space));
    sig.name = std::string(text.substr(space + 1, open - space - 1));
    sig.params =
        ParseDescriptorList(text.substr(open + 1, text.size() - open - 2));
    return sig;
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchemaMismatch, e.what());
  }
}

std::string FormatLabels(const std::vector<LabelRecord>& records) {
  std::string out(kLabelsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.sha256_original_app + ',' + r.class_infected + ',' +
           std::string(ComponentTypeName(r.component_type)) + ',' +
           r.method_infected + ',' + std::string(TriggerName(r.trigger_type)) +
           ',' + std::string(GuardedName(r.guarded_code_type)) + ',' +
           JoinDepths(r.depths) + '\n';
  }
  return out;
}

std::vector<LabelRecord> ParseLabels(std::string_view csv) {
  std::vector<LabelRecord> out;
  for (auto& row : internal::ParseTable(csv, kLabelsHeader, 7)) {
    LabelRecord r;
    r.sha256_original_app = std::move(row[0]);
    r.class_infected = std::move(row[1]);
    auto component = ComponentTypeFromName(row[2]);
    auto trigger = TriggerFromName(row[4]);
    auto guarded = GuardedFromName(row[5]);
    if (!component || !trigger || !guarded) {
      throw Error(ErrorKind::kSchemaMismatch,
                  "unknown component/trigger/guarded value in row for " +
                      r.sha256_original_app);
    }
    r.component_type = *component;
    r.method_infected = std::move(row[3]);
    r.trigger_type = *trigger;
    r.guarded_code_type = *guarded;
    r.depths = ParseDepths(row[6]);
    out.push_back(std::move(r));
  }
  return out;
}

void WriteLabels(const fs::path& path, const std::vector<LabelRecord>& records) {
  WriteFile(path, FormatLabels(records));
}

std::vector<LabelRecord> ReadLabels(const fs::path& path) {
  return ParseLabels(ReadFile(path));
}

std::string FormatFailures(const std::vector<FailureRecord>& records) {
  std::string out(kFailuresHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.app_id + ',' + std::string(FailureCategoryName(r.category)) + ',' +
           internal::SanitizeField(r.detail) + '\n';
  }
  return out;
}

std::vector<FailureRecord> ParseFailures(std::string_view csv) {
  std::vector<FailureRecord> out;
  for (auto& row : internal::ParseTable(csv, kFailuresHeader, 3)) {
    FailureRecord r;
    r.app_id = std::move(row[0]);
    bool known = false;
    for (auto c : {FailureCategory::kNoInsertionPoint,
                   FailureCategory::kRepackagingError,
                   FailureCategory::kApiLevelError,
                   FailureCategory::kParseError}) {
      if (FailureCategoryName(c) == row[1]) {
        r.category = c;
        known = true;
      }
    }
    if (!known) {
      throw Error(ErrorKind::kSchemaMismatch, "unknown category " + row[1]);
    }
    r.detail = std::move(row[2]);
    out.push_back(std::move(r));
  }
  return out;
}

InfectResult InfectOne(const fs::path& app_dir, TriggerType t,
                       GuardedCodeType g, std::uint64_t seed,
                       const fs::path& out_dir, const InfectOptions& options) {
  InfectResult result;
  AppBundle original;
  ClassHierarchy h;
  try {
    original = ParseApp(app_dir);
    h = BuildHierarchy(original);
  } catch (const Error& e) {
    result.outcome = Failure(app_dir, FailureCategory::kParseError, e.what());
    return result;
  }

  EntryPoints entries = ComputeEntryPoints(original, h);
  result.warnings = std::move(entries.warnings);
  CallGraph cg = BuildCallGraph(original, h, entries.methods);
  Rng rng(seed);
  InsertionPoint ip;
  try {
    if (options.dump_callgraph) {
      WriteFile(*options.dump_callgraph, DumpEdges(cg));
    }
    ip = ChooseInsertionPoint(CandidateMethods(DeveloperMethods(original), cg),
                              cg, h, original, rng);
  } catch (const Error& e) {
    auto category = e.kind() == ErrorKind::kNoInsertionPoint
                        ? FailureCategory::kNoInsertionPoint
                        : FailureCategory::kRepackagingError;
    result.outcome = Failure(app_dir, category, Detail(e, category));
    return result;
  }

  const Manifest& manifest = original.manifest;
  std::optional<int> api = manifest.target_sdk ? manifest.target_sdk
                                               : manifest.min_sdk;
  if (int needed = RequiredApiLevel(t, g); api && *api < needed) {
    result.outcome = Failure(
        app_dir, FailureCategory::kApiLevelError,
        "payload " + std::string(TriggerName(t)) + "/" +
            std::string(GuardedName(g)) + " needs API " +
            std::to_string(needed) + " but the app targets API " +
            std::to_string(*api));
    return result;
  }

  try {
    Payload payload = AssemblePayload(t, g, original, rng);
    AppBundle infected = Inject(original, ip, payload.code);
    infected.manifest = PatchManifest(infected.manifest, payload.spec.permissions);
    infected = PlaceNativeStubs(infected, payload.spec.native_reqs, g);
    EmitApp(infected, out_dir);
    result.integrity = Finalize(original, infected);
  } catch (const Error& e) {
    result.outcome = Failure(app_dir, FailureCategory::kRepackagingError, e.what());
    return result;
  }

  LabelRecord label;
  label.sha256_original_app = result.integrity->sha256_original;
  label.class_infected = ip.class_descriptor.dotted_name();
  label.component_type = ip.component_type;
  label.method_infected = FormatMethodInfected(ip.method);
  label.trigger_type = t;
  label.guarded_code_type = g;
  label.depths = ip.depths;
  result.outcome = std::move(label);
  return result;
}

std::vector<BatchItem> PlanBatch(const fs::path& apps_dir,
                                 std::uint64_t master_seed) {
  std::vector<std::string> names;
  std::error_code ec;
  for (fs::directory_iterator it(apps_dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_directory()) names.push_back(it->path().filename().string());
  }
  if (ec) {
    throw Error(ErrorKind::kIoFailure, apps_dir.string() + ": " + ec.message());
  }
  if (names.empty()) {
    throw Error(ErrorKind::kIoFailure,
                "no app directories under " + apps_dir.string());
  }
  std::sort(names.begin(), names.end());

  constexpr std::uint64_t kGuardedCount = 14;
  std::vector<BatchItem> plan;
  for (auto& name : names) {
    Rng rng(MixSeeds(master_seed, StableHash(name)));
    std::uint64_t combo = rng.Uniform(10 * kGuardedCount);
    BatchItem item;
    item.trigger = static_cast<TriggerType>(combo / kGuardedCount);
    item.guarded = static_cast<GuardedCodeType>(combo % kGuardedCount);
    item.seed = rng.Next();
    item.app_id = std::move(name);
    plan.push_back(std::move(item));
  }
  return plan;
}

BatchResult Batch(const fs::path& apps_dir, std::uint64_t master_seed,
                  const fs::path& out_root, int jobs) {
  const std::vector<BatchItem> plan = PlanBatch(apps_dir, master_seed);
  PrepareOutRoot(out_root);
  std::vector<InfectResult> results(plan.size());
  const auto n = static_cast<std::ptrdiff_t>(plan.size());
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#endif
  (void)jobs;
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const BatchItem& item = plan[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] =
        InfectOne(apps_dir / item.app_id, item.trigger, item.guarded,
                  item.seed, out_root / "apps" / item.app_id);
  }
  return Merge(plan, results);
}

BatchResult BatchSerial(const fs::path& apps_dir, std::uint64_t master_seed,
                        const fs::path& out_root) {
  const std::vector<BatchItem> plan = PlanBatch(apps_dir, master_seed);
  PrepareOutRoot(out_root);
  std::vector<InfectResult> results;
  results.reserve(plan.size());
  for (const BatchItem& item : plan) {
    results.push_back(InfectOne(apps_dir / item.app_id, item.trigger,
                                item.guarded, item.seed,
                                out_root / "apps" / item.app_id));
  }
  return Merge(plan, results);
}

std::string FormatIntegrity(
    const std::vector<std::pair<std::string, IntegrityRecord>>& rows) {
  std::string out = "app_id,sha256_original,sha256_infected,finalized_at\n";
  for (const auto& [id, r] : rows) {
    out += id + ',' + r.sha256_original + ',' + r.sha256_infected + ',' +
           r.finalized_at + '\n';
  }
  return out;
}

}  // namespace triggerforge
