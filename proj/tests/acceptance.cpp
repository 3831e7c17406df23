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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracle.hpp"
#include "test_util.hpp"
#include "triggerforge/corpus.hpp"
#include "triggerforge/eval.hpp"
#include "triggerforge/ir.hpp"
#include "triggerforge/packaging.hpp"

using namespace triggerforge;
namespace fs = std::filesystem;
using testutil::Quote;
using testutil::RunCli;

namespace {

// Thrown by Expect; carries the first broken condition.
struct Failed {
  std::string why;
};

void Expect(bool cond, const std::string& why) {
  if (!cond) throw Failed{why};
}

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = oracle::Slurp(e.path());
  }
  return out;
}

std::set<std::string> Permissions(const std::string& manifest) {
  static const std::regex re(R"re(<uses-permission\s+android:name="([^"]+)")re");
  std::set<std::string> out;
  for (std::sregex_iterator it(manifest.begin(), manifest.end(), re), end; it != end; ++it) {
    out.insert((*it)[1]);
  }
  return out;
}

std::string SmaliPath(const std::string& dotted) {
  std::string p = dotted;
  std::replace(p.begin(), p.end(), '.', '/');
  return "smali/" + p + ".smali";
}

struct MethodText {
  std::string registers;              // the .registers/.locals line
  std::vector<std::string> opcodes;   // trimmed instruction lines
};

// Finds `.method ... name(params)ret` in raw class text.
MethodText ExtractMethod(const std::string& cls, const std::string& method_infected) {
  std::size_t sp = method_infected.find(' ');
  std::string ret = method_infected.substr(0, sp);
  std::string head = method_infected.substr(sp + 1) + ret;
  MethodText out;
  std::istringstream in(cls);
  bool inside = false;
  for (std::string line; std::getline(in, line);) {
    std::string t = line.substr(std::min(line.find_first_not_of(" \t"), line.size()));
    if (!inside) {
      inside = t.starts_with(".method ") && t.ends_with(" " + head);
      continue;
    }
    if (t == ".end method") break;
    if (t.starts_with(".registers") || t.starts_with(".locals")) out.registers = t;
    if (t.empty() || t[0] == '.' || t[0] == ':' || t[0] == '#') continue;
    out.opcodes.push_back(t);
  }
  Expect(inside, "host method not found: " + method_infected);
  return out;
}

std::string InfectedDirFor(const fs::path& apps, const std::string& sha) {
  for (const auto& dir : oracle::AppDirs(testutil::Fixtures())) {
    if (DigestDirectory(dir) == sha) return (apps / dir.filename()).string();
  }
  throw Failed{"no fixture with digest " + sha};
}

std::string Pct(double x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", 100 * x);
  return buf;
}

// ---------------------------------------------------------------------------

void MetricReproduction(const testutil::TempDir& tmp) {
  struct Row {
    const char* tool;
    int pos, pos_flagged, neg, neg_flagged;
    const char *p, *r, *f;
  };
  const Row rows[] = {{"difuzer", 230, 134, 156, 41, "76.6", "58.3", "66.2"},
                      {"tsopen", 215, 32, 148, 15, "68.1", "14.9", "24.4"}};
  for (const auto& row : rows) {
    std::vector<LabelRecord> labels;
    std::vector<Verdict> verdicts;
    auto add = [&](bool malicious, bool flagged) {
      LabelRecord l;
      l.sha256_original_app = std::string(row.tool) + std::to_string(labels.size());
      l.class_infected = "com.x.A";
      l.method_infected = "V f()";
      l.trigger_type = TriggerType::kTime;
      l.guarded_code_type = malicious ? GuardedCodeType::kSmsImei : GuardedCodeType::kSetText;
      l.depths = {0};
      verdicts.push_back({l.sha256_original_app, true, flagged});
      labels.push_back(std::move(l));
    };
    for (int i = 0; i < row.pos; ++i) add(true, i < row.pos_flagged);
    for (int i = 0; i < row.neg; ++i) add(false, i < row.neg_flagged);
    fs::path dir = tmp / row.tool;
    fs::create_directories(dir);
    WriteLabels(dir / "labels.csv", labels);
    WriteFile(dir / "verdicts.csv", FormatVerdicts(verdicts));
    auto run = RunCli("score --labels " + Quote(dir / "labels.csv") + " --verdicts " +
                      Quote(dir / "verdicts.csv") + " --out " + Quote(dir / "metrics.csv"));
    Expect(run.code == 0, std::string(row.tool) + ": score exited " + std::to_string(run.code));

    std::istringstream csv(ReadFile(dir / "metrics.csv"));
    std::string header, values;
    std::getline(csv, header);
    std::getline(csv, values);
    int tp, fp, fn, tn;
    double p, r, f;
    Expect(std::sscanf(values.c_str(), "%d,%d,%d,%d,%lf,%lf,%lf", &tp, &fp, &fn, &tn, &p, &r, &f) == 7,
           "unreadable metrics.csv");
    double ep = static_cast<double>(row.pos_flagged) / (row.pos_flagged + row.neg_flagged);
    double er = static_cast<double>(row.pos_flagged) / row.pos;
    double ef = 2 * ep * er / (ep + er);
    Expect(std::fabs(p - ep) <= 0.0005 && std::fabs(r - er) <= 0.0005 && std::fabs(f - ef) <= 0.0005,
           std::string(row.tool) + ": ratios off");
    Expect(Pct(p) == row.p && Pct(r) == row.r && Pct(f) == row.f,
           std::string(row.tool) + ": got " + Pct(p) + "/" + Pct(r) + "/" + Pct(f));
  }
}

// Criteria 2 and 6 share the 140 infections.
struct MatrixRun {
  int infected = 0;
  std::string structure_failure;
};

void CombinationMatrix(const testutil::TempDir& tmp, MatrixRun& run) {
  const fs::path original = testutil::Fixture("app01");
  const auto before = Tree(original);
  std::uint64_t seed = 100;
  for (const auto& t : AllTriggers()) {
    for (const auto& g : AllGuarded()) {
      std::string name = std::string(t.name) + "-" + std::string(g.name);
      fs::path out = tmp / "matrix" / name;
      InfectResult r = InfectOne(original, t.type, g.type, seed++, out);
      Expect(r.ok(), name + ": infection failed");
      const auto& label = std::get<LabelRecord>(r.outcome);
      ValidationReport rep = Validate(out, label, original);
      for (const auto& c : rep.checks) Expect(c.passed, name + ": check " + c.name + ": " + c.detail);
      Expect(rep.checks.size() == 4, name + ": expected four checks");
      ++run.infected;

      if (!run.structure_failure.empty()) continue;
      try {
        const auto after = Tree(out);
        const std::string host = SmaliPath(label.class_infected);
        std::set<std::string> changed;
        for (const auto& [path, bytes] : after) {
          auto it = before.find(path);
          if (it == before.end() || it->second != bytes) changed.insert(path);
        }
        for (const auto& [path, bytes] : before) {
          Expect(after.count(path), name + ": removed " + path);
        }
        int new_classes = 0;
        for (const auto& path : changed) {
          bool allowed = path == host || path == "AndroidManifest.xml" ||
                         (path.starts_with("lib/") && path.ends_with("/libtriggerzoo.so"));
          if (!allowed && !before.count(path) && path.starts_with("smali/") &&
              path.find("/gen/Zoo") != std::string::npos) {
            allowed = true;
            ++new_classes;
          }
          Expect(allowed, name + ": unexpected delta " + path);
        }
        Expect(new_classes == 1, name + ": expected one new class");
        Expect(changed.count(host) == 1, name + ": host class unchanged");

        MethodText old_m = ExtractMethod(before.at(host), label.method_infected);
        MethodText new_m = ExtractMethod(after.at(host), label.method_infected);
        Expect(old_m.registers == new_m.registers, name + ": register count changed");
        Expect(new_m.opcodes.size() == old_m.opcodes.size() + 1, name + ": expected one added opcode");
        Expect(std::equal(old_m.opcodes.begin(), old_m.opcodes.end(), new_m.opcodes.begin() + 1),
               name + ": original body is not a contiguous suffix");
        Expect(new_m.opcodes.front().starts_with("invoke-static {}, L"),
               name + ": first opcode is not the payload call");
      } catch (const Failed& f) {
        run.structure_failure = f.why;
      }
    }
  }
  Expect(run.infected == 140, "expected 140 infections");
}

void RoundTrip(const testutil::TempDir& tmp) {
  auto apps = oracle::AppDirs(testutil::Fixtures());
  std::size_t classes = 0;
  for (const auto& dir : apps) {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.path().extension() != ".smali") continue;
      std::string raw = oracle::Slurp(e.path());
      Expect(EmitClass(ParseClass(raw)) == raw, "class differs after round trip: " + e.path().string());
      ++classes;
    }
    fs::path out = tmp / "roundtrip" / dir.filename();
    EmitApp(ParseApp(dir), out);
    Expect(Tree(out) == Tree(dir), "app tree differs after round trip: " + dir.string());
  }
  Expect(apps.size() >= 10, "fewer than 10 fixture apps");
  Expect(classes >= 50, "fewer than 50 class files");
}

void Determinism(const testutil::TempDir& tmp) {
  auto batch = [&](const std::string& name, int seed, int jobs) {
    auto r = RunCli("batch --apps " + Quote(testutil::Fixtures()) + " --out " + Quote(tmp / name) +
                    " --seed " + std::to_string(seed) + " --jobs " + std::to_string(jobs));
    Expect(r.code == 0, "batch " + name + " exited " + std::to_string(r.code));
    return Tree(tmp / name);
  };
  auto a = batch("seed1a", 1, 4);
  auto b = batch("seed1b", 1, 1);
  Expect(a == b, "same seed produced different trees");
  Expect(a.count("labels.csv") && a.count("failures.csv"), "labels.csv or failures.csv missing");
  batch("seed2", 2, 4);

  auto assignments = [&](const std::string& name) {
    std::map<std::string, std::pair<TriggerType, GuardedCodeType>> out;
    for (const auto& l : ReadLabels(tmp / name / "labels.csv")) {
      out[l.sha256_original_app] = {l.trigger_type, l.guarded_code_type};
    }
    return out;
  };
  Expect(assignments("seed1a") != assignments("seed2"), "seeds 1 and 2 gave the same assignments");
}

void PermissionSoundness(const testutil::TempDir& tmp) {
  const fs::path original = testutil::Fixture("app02");
  const auto before = Permissions(ReadFile(original / "AndroidManifest.xml"));
  {
    fs::path out = tmp / "perm-http";
    Expect(InfectOne(original, TriggerType::kTime, GuardedCodeType::kHttpLocation, 5, out).ok(),
           "http_location infection failed");
    std::set<std::string> added;
    for (const auto& p : Permissions(ReadFile(out / "AndroidManifest.xml"))) {
      if (!before.count(p)) added.insert(p);
    }
    const std::set<std::string> expected = {"android.permission.ACCESS_COARSE_LOCATION",
                                            "android.permission.ACCESS_FINE_LOCATION",
                                            "android.permission.INTERNET"};
    Expect(added == expected, "http_location added a different permission set");
  }
  // With the sms trigger every payload adds at least READ_SMS, so each
  // guarded type gets a mutation.
  for (const auto& g : AllGuarded()) {
    std::string name(g.name);
    fs::path out = tmp / ("perm-" + name);
    InfectResult r = InfectOne(original, TriggerType::kSms, g.type, 9, out);
    Expect(r.ok(), name + ": infection failed");
    const auto& label = std::get<LabelRecord>(r.outcome);
    Expect(Validate(out, label, original).Find("permissions")->passed, name + ": check (c) failed");

    const std::string manifest = ReadFile(out / "AndroidManifest.xml");
    int mutations = 0;
    for (const auto& p : Permissions(manifest)) {
      if (before.count(p)) continue;
      std::string cut = manifest;
      std::size_t at = cut.find("\"" + p + "\"");
      std::size_t start = cut.rfind('\n', at) + 1;
      cut.erase(start, cut.find('\n', at) + 1 - start);
      WriteFile(out / "AndroidManifest.xml", cut);
      Expect(!Validate(out, label, original).Find("permissions")->passed,
             name + ": deleting " + p + " went unnoticed");
      ++mutations;
    }
    WriteFile(out / "AndroidManifest.xml", manifest);
    Expect(mutations > 0, name + ": no added permission to mutate");
  }
}

void StructurePreservation(const MatrixRun& run) {
  Expect(run.infected == 140, "combination matrix did not complete");
  Expect(run.structure_failure.empty(), run.structure_failure);
}

void CallgraphOracle(const testutil::TempDir& tmp) {
  for (const auto& dir : oracle::AppDirs(testutil::Fixtures())) {
    AppBundle b = ParseApp(dir);
    CallGraph g = BuildCallGraph(b, BuildHierarchy(b));
    oracle::Graph og = oracle::BuildGraph(oracle::Load(dir));
    Expect(DumpEdges(g) == oracle::DumpEdges(og), "edges differ: " + dir.string());
    for (const auto& n : g.nodes) {
      Expect(Depths(g, n) == oracle::Depths(og, n.ref()), "depths differ: " + n.ref());
    }
  }

  auto batch = RunCli("batch --apps " + Quote(testutil::Fixtures()) + " --out " + Quote(tmp / "cg") +
                      " --seed 7");
  Expect(batch.code == 0, "batch failed");
  auto stats = RunCli("stats --labels " + Quote(tmp / "cg/labels.csv") + " --out-dir " +
                      Quote(tmp / "cg-stats"));
  Expect(stats.code == 0, "stats failed");

  std::map<std::string, fs::path> by_sha;
  for (const auto& dir : oracle::AppDirs(testutil::Fixtures())) by_sha[DigestDirectory(dir)] = dir;
  std::map<int, int> histogram;
  for (const auto& label : ReadLabels(tmp / "cg/labels.csv")) {
    auto it = by_sha.find(label.sha256_original_app);
    Expect(it != by_sha.end(), "label for an unknown app");
    oracle::App app = oracle::Load(it->second);
    std::string owner = "L" + label.class_infected + ";";
    std::replace(owner.begin(), owner.end(), '.', '/');
    std::size_t sp = label.method_infected.find(' ');
    std::string id = owner + "->" + label.method_infected.substr(sp + 1) +
                     label.method_infected.substr(0, sp);
    auto depths = oracle::Depths(oracle::BuildGraph(app), id);
    Expect(!depths.empty() && depths == label.depths, "label depths differ for " + id);
    ++histogram[depths.front()];
  }
  std::string expected = "depth,count\n";
  for (const auto& [d, n] : histogram) expected += std::to_string(d) + "," + std::to_string(n) + "\n";
  Expect(ReadFile(tmp / "cg-stats/depths.csv") == expected, "depths.csv differs from the oracle histogram");
}

void FailureTaxonomy(const testutil::TempDir& tmp) {
  InfectResult r = InfectOne(testutil::Fixture("app-noreach"), TriggerType::kTime,
                             GuardedCodeType::kExit, 1, tmp / "noreach-lib");
  Expect(!r.ok() && std::get<FailureRecord>(r.outcome).category == FailureCategory::kNoInsertionPoint,
         "library did not report NoInsertionPoint");
  auto run = RunCli("infect --app " + Quote(testutil::Fixture("app-noreach")) +
                    " --trigger time --guarded exit --out " + Quote(tmp / "noreach-cli") +
                    " --failures " + Quote(tmp / "noreach.csv"));
  Expect(run.code == 1, "infect exited " + std::to_string(run.code));
  auto failures = ParseFailures(ReadFile(tmp / "noreach.csv"));
  Expect(failures.size() == 1 && failures[0].category == FailureCategory::kNoInsertionPoint,
         "failures.csv does not record NoInsertionPoint");
}

}  // namespace

int main() {
  testutil::TempDir tmp;
  MatrixRun matrix;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = untimed
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric reproduction", 1.0, [&] { MetricReproduction(tmp); }},
      {2, "exhaustive combination matrix", 60.0, [&] { CombinationMatrix(tmp, matrix); }},
      {3, "round trip", 5.0, [&] { RoundTrip(tmp); }},
      {4, "determinism", 0, [&] { Determinism(tmp); }},
      {5, "permission soundness", 0, [&] { PermissionSoundness(tmp); }},
      {6, "behavior-preservation structure", 0, [&] { StructurePreservation(matrix); }},
      {7, "callgraph and depth oracle", 0, [&] { CallgraphOracle(tmp); }},
      {8, "failure taxonomy", 0, [&] { FailureTaxonomy(tmp); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string why;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const Failed& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (why.empty() && c.limit_s > 0 && secs > c.limit_s) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "took %.2fs, limit %.0fs", secs, c.limit_s);
      why = buf;
    }
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", why.empty() ? "PASS" : "FAIL", c.id, c.name,
                secs, why.empty() ? "" : ": ", why.c_str());
    failed += !why.empty();
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
