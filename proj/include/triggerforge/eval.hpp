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

#ifndef TRIGGERFORGE_EVAL_HPP_
#define TRIGGERFORGE_EVAL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "triggerforge/corpus.hpp"
#include "triggerforge/ir.hpp"

namespace triggerforge {

/// A detector's answer for one app. Invariant: flagged implies analyzed.
struct Verdict {
  std::string app_id;  // sha256 of the original app
  bool analyzed = false;
  bool flagged = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline constexpr std::string_view kVerdictsHeader = "app_id,analyzed,flagged";

std::string FormatVerdicts(const std::vector<Verdict>& verdicts);
/// Throws Error{kSchemaMismatch} on bad header, columns, booleans, or a
/// flagged-but-unanalyzed row.
std::vector<Verdict> ParseVerdicts(std::string_view csv);

struct Metrics {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int tn = 0;
  int analyzed_pos = 0;
  int analyzed_neg = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Positives are labels whose guarded code is malicious. Unanalyzed apps
/// are left out of every cell, so recall is over analyzed positives.
/// Throws Error{kUnknownApp} or Error{kDuplicateVerdict}.
Metrics Score(const std::vector<LabelRecord>& labels,
              const std::vector<Verdict>& verdicts);

/// Recomputes the ratios from the four counts.
Metrics MetricsFromCounts(int tp, int fp, int fn, int tn);

/// `tp,fp,fn,tn,precision,recall,f1` with ratios to 4 decimals.
std::string FormatMetricsCsv(const Metrics& m);
/// Percentages to one decimal, for people.
std::string FormatMetricsTable(const Metrics& m);

/// Flags a bundle when some method has a conditional branch whose preceding
/// code calls a trigger-anchor API and whose guarded region (up to the
/// branch target, else the method end) calls a sink-anchor API. The verdict
/// is keyed by the bundle digest. Intentionally naive.
Verdict BaselineDetect(const AppBundle& bundle);
/// Parse failures give analyzed = false.
Verdict BaselineDetect(const std::filesystem::path& app_dir);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_EVAL_HPP_
