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

#include "triggerforge/eval.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "csv.hpp"
#include "triggerforge/error.hpp"
#include "triggerforge/packaging.hpp"
#include "triggerforge/payload.hpp"

namespace triggerforge {
namespace {

bool ParseBool(const std::string& s, std::size_t row) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw Error(ErrorKind::kSchemaMismatch, "row " + std::to_string(row) +
                                              ": expected 0 or 1, got '" + s +
                                              "'");
}

bool Matches(const Instruction& line, bool want_trigger) {
  for (const ApiAnchor& a : ApiAnchors()) {
    if ((want_trigger ? a.trigger : a.sink) &&
        line.text.find(a.pattern) != std::string::npos) {
      return true;
    }
  }
  return false;
}

bool MethodLooksGuarded(const MethodDef& m) {
  const auto& body = m.body;
  bool trigger_seen = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Instruction& ins = body[i];
    if (ins.is_opcode() && ins.opcode().starts_with("if-") && trigger_seen) {
      std::string_view text = ins.text;
      std::size_t colon = text.rfind(':');
      std::string_view target =
          colon == std::string_view::npos ? "" : text.substr(colon);
      for (std::size_t j = i + 1; j < body.size(); ++j) {
        if (!target.empty() && body[j].is_label() && body[j].text == target) {
          break;
        }
        if (Matches(body[j], false)) return true;
      }
    }
    if (Matches(ins, true)) trigger_seen = true;
  }
  return false;
}

std::string Ratio(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string FormatVerdicts(const std::vector<Verdict>& verdicts) {
  std::string out(kVerdictsHeader);
  out += '\n';
  for (const auto& v : verdicts) {
    out += v.app_id + (v.analyzed ? ",1" : ",0") + (v.flagged ? ",1" : ",0") +
           '\n';
  }
  return out;
}

std::vector<Verdict> ParseVerdicts(std::string_view csv) {
  std::vector<Verdict> out;
  std::size_t row = 1;
  for (auto& fields : internal::ParseTable(csv, kVerdictsHeader, 3)) {
    ++row;
    Verdict v{std::move(fields[0]), ParseBool(fields[1], row),
              ParseBool(fields[2], row)};
    if (v.flagged && !v.analyzed) {
      throw Error(ErrorKind::kSchemaMismatch,
                  "row " + std::to_string(row) + ": flagged but not analyzed");
    }
    out.push_back(std::move(v));
  }
  return out;
}

Metrics MetricsFromCounts(int tp, int fp, int fn, int tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.analyzed_pos = tp + fn;
  m.analyzed_neg = fp + tn;
  m.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  m.recall = m.analyzed_pos == 0 ? 0.0
                                 : static_cast<double>(tp) / m.analyzed_pos;
  m.f1 = m.precision + m.recall == 0
             ? 0.0
             : 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics Score(const std::vector<LabelRecord>& labels,
              const std::vector<Verdict>& verdicts) {
  std::map<std::string, bool> malicious;
  for (const auto& l : labels) {
    malicious[l.sha256_original_app] = IsMalicious(l.guarded_code_type);
  }
  std::set<std::string> seen;
  int tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& v : verdicts) {
    auto it = malicious.find(v.app_id);
    if (it == malicious.end()) {
      throw Error(ErrorKind::kUnknownApp, "no label for " + v.app_id);
    }
    if (!seen.insert(v.app_id).second) {
      throw Error(ErrorKind::kDuplicateVerdict, "second verdict for " + v.app_id);
    }
    if (!v.analyzed) continue;
    if (it->second) {
      ++(v.flagged ? tp : fn);
    } else {
      ++(v.flagged ? fp : tn);
    }
  }
  return MetricsFromCounts(tp, fp, fn, tn);
}

std::string FormatMetricsCsv(const Metrics& m) {
  return "tp,fp,fn,tn,precision,recall,f1\n" + std::to_string(m.tp) + ',' +
         std::to_string(m.fp) + ',' + std::to_string(m.fn) + ',' +
         std::to_string(m.tn) + ',' + Ratio(m.precision) + ',' +
         Ratio(m.recall) + ',' + Ratio(m.f1) + '\n';
}

std::string FormatMetricsTable(const Metrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "            analyzed  flagged\n"
                "malicious   %8d  %7d\n"
                "benign      %8d  %7d\n"
                "precision %5.1f%%  recall %5.1f%%  f1 %5.1f%%\n",
                m.analyzed_pos, m.tp, m.analyzed_neg, m.fp, 100 * m.precision,
                100 * m.recall, 100 * m.f1);
  return buf;
}

Verdict BaselineDetect(const AppBundle& bundle) {
  Verdict v{DigestBundle(bundle), true, false};
  for (const auto& [desc, cls] : bundle.classes) {
    for (const auto& m : cls.methods) {
      if (MethodLooksGuarded(m)) {
        v.flagged = true;
        return v;
      }
    }
  }
  return v;
}

Verdict BaselineDetect(const std::filesystem::path& app_dir) {
  try {
    return BaselineDetect(ParseApp(app_dir));
  } catch (const Error&) {
    return {app_dir.filename().string(), false, false};
  }
}

}  // namespace triggerforge
