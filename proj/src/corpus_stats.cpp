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
#include <cstdio>

#include "triggerforge/corpus.hpp"

namespace triggerforge {

CorpusStats ComputeStats(const std::vector<LabelRecord>& records) {
  CorpusStats s;
  s.total = records.size();
  for (const auto& r : records) {
    ++s.per_trigger[r.trigger_type];
    ++s.per_guarded[r.guarded_code_type];
    ++s.combinations[{r.trigger_type, r.guarded_code_type}];
    ++(IsMalicious(r.guarded_code_type) ? s.malicious : s.benign);
    if (!r.depths.empty()) {
      ++s.depth_histogram[*std::min_element(r.depths.begin(), r.depths.end())];
    }
    ++s.components[r.component_type];
  }
  return s;
}

std::string FormatDepthsCsv(const CorpusStats& stats) {
  std::string out = "depth,count\n";
  for (const auto& [depth, count] : stats.depth_histogram) {
    out += std::to_string(depth) + ',' + std::to_string(count) + '\n';
  }
  return out;
}

std::string FormatTypesCsv(const CorpusStats& stats) {
  std::string out = "trigger_type,guarded_code_type,count\n";
  for (const auto& [combo, count] : stats.combinations) {
    out += std::string(TriggerName(combo.first)) + ',' +
           std::string(GuardedName(combo.second)) + ',' +
           std::to_string(count) + '\n';
  }
  return out;
}

namespace {

std::string Percent(int part, std::size_t whole) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%5.1f%%",
                whole == 0 ? 0.0 : 100.0 * part / static_cast<double>(whole));
  return buf;
}

std::string Row(std::string_view name, int count, std::size_t total) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "  %-24.*s %6d  %s\n",
                static_cast<int>(name.size()), name.data(), count,
                Percent(count, total).c_str());
  return buf;
}

}  // namespace

std::string FormatStatsSummary(const CorpusStats& stats) {
  std::string out = "labeled apps: " + std::to_string(stats.total) + "\n";
  out += "malicious: " + std::to_string(stats.malicious) +
         "  benign: " + std::to_string(stats.benign) + "\n";
  out += "trigger types:\n";
  for (const auto& info : AllTriggers()) {
    auto it = stats.per_trigger.find(info.type);
    out += Row(info.name, it == stats.per_trigger.end() ? 0 : it->second,
               stats.total);
  }
  out += "guarded code types:\n";
  for (const auto& info : AllGuarded()) {
    auto it = stats.per_guarded.find(info.type);
    out += Row(info.name, it == stats.per_guarded.end() ? 0 : it->second,
               stats.total);
  }
  out += "components:\n";
  for (const auto& [type, count] : stats.components) {
    out += Row(ComponentTypeName(type), count, stats.total);
  }
  out += "minimum depth:\n";
  for (const auto& [depth, count] : stats.depth_histogram) {
    out += Row(std::to_string(depth), count, stats.total);
  }
  return out;
}

}  // namespace triggerforge
