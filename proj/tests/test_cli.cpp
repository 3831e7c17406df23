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

#include <map>
#include <sstream>
#include <string>

#include "cli_runner.hpp"
#include "doctest.h"
#include "test_util.hpp"
#include "triggerforge/corpus.hpp"
#include "triggerforge/eval.hpp"

using namespace triggerforge;
namespace fs = std::filesystem;

namespace {

using Run = testutil::CliRun;

Run Cli(const std::string& args, bool with_stderr = false) {
  return testutil::RunCli(args, with_stderr);
}

std::string Q(const fs::path& p) { return testutil::Quote(p); }

std::vector<std::string> Lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("type listings") {
  Run t = Cli("--list-triggers");
  CHECK(t.code == 0);
  auto tl = Lines(t.out);
  REQUIRE(tl.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& info = AllTriggers()[i];
    CHECK(tl[i] == std::string(info.name) + "\t" + std::string(info.description));
  }
  Run g = Cli("--list-guarded");
  CHECK(g.code == 0);
  auto gl = Lines(g.out);
  REQUIRE(gl.size() == 14);
  int malicious = 0;
  for (const auto& line : gl) malicious += line.find("\tmalicious\t") != std::string::npos;
  CHECK(malicious == 8);
  CHECK(gl[7].starts_with("http_location\tmalicious\t"));

  Run all = Cli("list-types");
  CHECK(all.code == 0);
  for (const auto& info : AllTriggers()) CHECK(all.out.find(std::string(info.name)) != std::string::npos);
  for (const auto& info : AllGuarded()) CHECK(all.out.find(std::string(info.name)) != std::string::npos);
}

TEST_CASE("help lists the vocabulary for every subcommand") {
  for (const char* sub : {"infect", "batch", "validate", "stats", "detect", "score", "list-types"}) {
    CAPTURE(sub);
    Run r = Cli(std::string(sub) + " --help");
    CHECK(r.code == 0);
    CHECK(r.out.find("native_phone_number_network") != std::string::npos);
    CHECK(r.out.find("is_screen_off") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 2") {
  testutil::TempDir tmp;
  Run bogus = Cli("infect --app " + Q(testutil::Fixture("app01")) +
                      " --trigger bogus --guarded exit --out " + Q(tmp / "o"),
                  true);
  CHECK(bogus.code == 2);
  CHECK(bogus.out.find("bogus") != std::string::npos);
  CHECK(Cli("").code == 2);
  CHECK(Cli("infect").code == 2);
  CHECK(Cli("frobnicate").code == 2);
}

TEST_CASE("infect: seed from flag or environment") {
  testutil::TempDir tmp;
  std::string base = "infect --app " + Q(testutil::Fixture("app02")) +
                     " --trigger location --guarded write_string";
  CHECK(Cli(base + " --seed 42 --out " + Q(tmp / "flag") + " --label " + Q(tmp / "flag.csv")).code == 0);
  CHECK(testutil::RunCli(base + " --out " + Q(tmp / "env") + " --label " + Q(tmp / "env.csv"),
                         false, "TRIGGERFORGE_SEED=42")
            .code == 0);
  CHECK(DigestDirectory(tmp / "flag") == DigestDirectory(tmp / "env"));
  CHECK(ReadFile(tmp / "flag.csv") == ReadFile(tmp / "env.csv"));

  // The flag wins over the environment.
  CHECK(testutil::RunCli(base + " --seed 42 --out " + Q(tmp / "both"), false,
                         "TRIGGERFORGE_SEED=1")
            .code == 0);
  CHECK(DigestDirectory(tmp / "both") == DigestDirectory(tmp / "flag"));

  // Without --label the row goes to stdout.
  Run stdout_label = Cli(base + " --seed 42 --out " + Q(tmp / "stdout"));
  CHECK(stdout_label.code == 0);
  CHECK(stdout_label.out == ReadFile(tmp / "flag.csv"));
}

TEST_CASE("infect failures exit 1 and name the category") {
  testutil::TempDir tmp;
  Run r = Cli("infect --app " + Q(testutil::Fixture("app-noreach")) +
                  " --trigger time --guarded exit --out " + Q(tmp / "o") + " --failures " +
                  Q(tmp / "f.csv"),
              true);
  CHECK(r.code == 1);
  CHECK(r.out.find("NoInsertionPoint") != std::string::npos);
  auto failures = ParseFailures(ReadFile(tmp / "f.csv"));
  REQUIRE(failures.size() == 1);
  CHECK(failures[0].category == FailureCategory::kNoInsertionPoint);
}

TEST_CASE("pipeline: batch, validate, stats, detect, score") {
  testutil::TempDir tmp;
  Run b = Cli("batch --apps " + Q(testutil::Fixtures()) + " --out " + Q(tmp / "corpus") +
              " --seed 3 --jobs 2 --integrity " + Q(tmp / "integrity.csv"));
  REQUIRE(b.code == 0);
  auto labels = ReadLabels(tmp / "corpus/labels.csv");
  auto failures = ParseFailures(ReadFile(tmp / "corpus/failures.csv"));
  CHECK(labels.size() + failures.size() == 21);

  std::map<std::string, std::string> infected_dir;  // sha256_original -> app dir
  for (const auto& e : fs::directory_iterator(tmp / "corpus/apps")) {
    infected_dir[DigestDirectory(testutil::Fixture(e.path().filename().string()))] =
        e.path().string();
  }
  REQUIRE(infected_dir.size() == labels.size());

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& dir = infected_dir.at(labels[i].sha256_original_app);
    CAPTURE(dir);
    Run v = Cli("validate --app " + Q(dir) + " --label " + Q(tmp / "corpus/labels.csv") +
                " --row " + std::to_string(i) + " --original " +
                Q(testutil::Fixture(fs::path(dir).filename().string())));
    CHECK(v.code == 0);
  }

  Run s = Cli("stats --labels " + Q(tmp / "corpus/labels.csv") + " --out-dir " + Q(tmp / "stats"));
  CHECK(s.code == 0);
  CHECK(ReadFile(tmp / "stats/depths.csv") == FormatDepthsCsv(ComputeStats(labels)));
  CHECK(fs::exists(tmp / "stats/types.csv"));

  std::string detect = "detect --out " + Q(tmp / "verdicts.csv");
  for (const auto& [sha, dir] : infected_dir) detect += " --app " + Q(dir) + " --app-id " + sha;
  REQUIRE(Cli(detect).code == 0);
  auto verdicts = ParseVerdicts(ReadFile(tmp / "verdicts.csv"));
  CHECK(verdicts.size() == labels.size());

  Run sc = Cli("score --labels " + Q(tmp / "corpus/labels.csv") + " --verdicts " +
               Q(tmp / "verdicts.csv") + " --out " + Q(tmp / "metrics.csv"));
  CHECK(sc.code == 0);
  CHECK(ReadFile(tmp / "metrics.csv") == FormatMetricsCsv(Score(labels, verdicts)));

  // A verdict for an app that has no label is an error.
  WriteFile(tmp / "bad.csv", "app_id,analyzed,flagged\nnobody,1,1\n");
  Run bad = Cli("score --labels " + Q(tmp / "corpus/labels.csv") + " --verdicts " +
                    Q(tmp / "bad.csv"),
                true);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("UnknownApp") != std::string::npos);
}
