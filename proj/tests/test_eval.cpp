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

#include <algorithm>
#include <random>
#include <string>

#include "doctest.h"
#include "test_util.hpp"
#include "triggerforge/error.hpp"
#include "triggerforge/eval.hpp"

using namespace triggerforge;

namespace {

LabelRecord Label(std::string id, bool malicious) {
  LabelRecord r;
  r.sha256_original_app = std::move(id);
  r.class_infected = "a.B";
  r.method_infected = "V f()";
  r.trigger_type = TriggerType::kTime;
  r.guarded_code_type = malicious ? GuardedCodeType::kSmsImei : GuardedCodeType::kSetText;
  r.depths = {0};
  return r;
}

// Builds a labeled population whose confusion matrix is known by construction.
struct Population {
  std::vector<LabelRecord> labels;
  std::vector<Verdict> verdicts;
};

Population Make(int pos, int pos_flagged, int neg, int neg_flagged, int unanalyzed = 0) {
  Population p;
  int n = 0;
  auto add = [&](bool malicious, bool analyzed, bool flagged) {
    std::string id = "app" + std::to_string(n++);
    p.labels.push_back(Label(id, malicious));
    p.verdicts.push_back({id, analyzed, flagged});
  };
  for (int i = 0; i < pos; ++i) add(true, true, i < pos_flagged);
  for (int i = 0; i < neg; ++i) add(false, true, i < neg_flagged);
  for (int i = 0; i < unanalyzed; ++i) add(i % 2 == 0, false, false);
  return p;
}

ErrorKind ScoreKind(const Population& p) {
  try {
    Score(p.labels, p.verdicts);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kIoFailure;
}

ErrorKind ParseKind(const std::string& csv) {
  try {
    ParseVerdicts(csv);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kIoFailure;
}

}  // namespace

TEST_CASE("published counts reproduce published ratios") {
  // precision = tp/(tp+fp), recall = tp/analyzed_pos, f1 = harmonic mean.
  Population a = Make(230, 134, 156, 41, 20);
  Metrics m = Score(a.labels, a.verdicts);
  CHECK(m.tp == 134);
  CHECK(m.fn == 96);
  CHECK(m.fp == 41);
  CHECK(m.tn == 115);
  CHECK(m.analyzed_pos == 230);
  CHECK(m.analyzed_neg == 156);
  CHECK(m.precision == doctest::Approx(0.766).epsilon(0.001));
  CHECK(m.recall == doctest::Approx(0.583).epsilon(0.001));
  CHECK(m.f1 == doctest::Approx(0.662).epsilon(0.001));
  CHECK(FormatMetricsCsv(m) == "tp,fp,fn,tn,precision,recall,f1\n134,41,96,115,0.7657,0.5826,0.6617\n");

  Population b = Make(215, 32, 148, 15);
  Metrics t = Score(b.labels, b.verdicts);
  CHECK(t.precision == doctest::Approx(0.681).epsilon(0.001));
  CHECK(t.recall == doctest::Approx(0.149).epsilon(0.001));
  CHECK(t.f1 == doctest::Approx(0.244).epsilon(0.002));
  std::string table = FormatMetricsTable(t);
  CHECK(table.find(" 68.1%") != std::string::npos);
  CHECK(table.find(" 14.9%") != std::string::npos);
  CHECK(table.find(" 24.4%") != std::string::npos);
}

TEST_CASE("degenerate populations") {
  Population none = Make(10, 0, 10, 0);
  Metrics m = Score(none.labels, none.verdicts);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);

  Population pos = Make(10, 10, 0, 0);
  Metrics p = Score(pos.labels, pos.verdicts);
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f1 == 1.0);
  CHECK(p.analyzed_neg == 0);

  Population skipped = Make(0, 0, 0, 0, 6);
  Metrics s = Score(skipped.labels, skipped.verdicts);
  CHECK(s.tp + s.fp + s.fn + s.tn == 0);
}

TEST_CASE("scoring errors") {
  Population unknown = Make(3, 1, 3, 1);
  unknown.verdicts.push_back({"stranger", true, true});
  CHECK(ScoreKind(unknown) == ErrorKind::kUnknownApp);

  Population dup = Make(3, 1, 3, 1);
  dup.verdicts.push_back(dup.verdicts.front());
  CHECK(ScoreKind(dup) == ErrorKind::kDuplicateVerdict);
}

TEST_CASE("scoring is order independent") {
  Population p = Make(40, 17, 30, 9, 5);
  Metrics base = Score(p.labels, p.verdicts);
  std::mt19937 gen(5);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(p.labels.begin(), p.labels.end(), gen);
    std::shuffle(p.verdicts.begin(), p.verdicts.end(), gen);
    Metrics m = Score(p.labels, p.verdicts);
    CHECK(m.tp == base.tp);
    CHECK(m.fp == base.fp);
    CHECK(m.fn == base.fn);
    CHECK(m.tn == base.tn);
  }
  // Labels without a verdict count as not analyzed.
  p.verdicts.resize(p.verdicts.size() / 2);
  Metrics half = Score(p.labels, p.verdicts);
  CHECK(half.analyzed_pos + half.analyzed_neg <= base.analyzed_pos + base.analyzed_neg);
}

TEST_CASE("verdicts csv") {
  std::mt19937 gen(9);
  std::vector<Verdict> v;
  for (int i = 0; i < 100; ++i) {
    bool analyzed = gen() % 2;
    v.push_back({"id" + std::to_string(i), analyzed, analyzed && gen() % 2});
  }
  std::string csv = FormatVerdicts(v);
  CHECK(csv.starts_with(std::string(kVerdictsHeader) + "\n"));
  CHECK(ParseVerdicts(csv) == v);
  CHECK(FormatVerdicts({{"a", true, false}}) == "app_id,analyzed,flagged\na,1,0\n");

  std::string h(kVerdictsHeader);
  CHECK(ParseKind(h + "\na,1\n") == ErrorKind::kSchemaMismatch);
  CHECK(ParseKind(h + "\na,0,1\n") == ErrorKind::kSchemaMismatch);
  CHECK(ParseKind(h + "\na,yes,0\n") == ErrorKind::kSchemaMismatch);
  CHECK(ParseKind("id,analyzed,flagged\na,1,0\n") == ErrorKind::kSchemaMismatch);
}

TEST_CASE("baseline detector") {
  for (const auto& app : {"app01", "app02", "app03", "app08", "app13"}) {
    CAPTURE(app);
    Verdict v = BaselineDetect(testutil::Fixture(app));
    CHECK(v.analyzed);
    CHECK_FALSE(v.flagged);
    CHECK(v.app_id == DigestDirectory(testutil::Fixture(app)));
  }
  testutil::TempDir tmp;
  CHECK_FALSE(BaselineDetect(tmp / "missing").analyzed);

  // A trigger reading followed by a sink inside the branch is flagged; a
  // payload whose guarded block touches no sink is not.
  int flagged_malicious = 0;
  int flagged_benign = 0;
  for (const auto& t : AllTriggers()) {
    for (const auto& g : AllGuarded()) {
      std::string name = std::string(TriggerName(t.type)) + "-" + std::string(GuardedName(g.type));
      InfectResult r = InfectOne(testutil::Fixture("app01"), t.type, g.type, 11, tmp / name);
      REQUIRE(r.ok());
      Verdict v = BaselineDetect(tmp / name);
      CHECK(v.analyzed);
      CHECK(v.app_id == r.integrity->sha256_infected);
      CAPTURE(name);
      bool expected = t.type != TriggerType::kAddition && g.type != GuardedCodeType::kReturn;
      CHECK(v.flagged == expected);
      (IsMalicious(g.type) ? flagged_malicious : flagged_benign) += v.flagged;
    }
  }
  CHECK(flagged_malicious == 9 * 8);
  CHECK(flagged_benign == 9 * 5);
}
