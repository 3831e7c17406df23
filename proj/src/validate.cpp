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
#include <set>

#include "triggerforge/corpus.hpp"
#include "triggerforge/error.hpp"

namespace triggerforge {
namespace {

constexpr std::string_view kBombName = "bomb";

bool IsHex8(std::string_view s) {
  return s.size() == 8 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

MethodSig BombSig(const TypeDescriptor& cls) {
  return {cls, std::string(kBombName), {}, TypeDescriptor::Parse("V")};
}

/// Generated classes: `<package path>/gen/Zoo<8 hex>` defining static bomb()V.
std::vector<const ClassDef*> BombClasses(const AppBundle& bundle) {
  std::string prefix = bundle.package_name + ".gen.Zoo";
  std::vector<const ClassDef*> out;
  for (const auto& [desc, cls] : bundle.classes) {
    std::string dotted = desc.dotted_name();
    if (!dotted.starts_with(prefix) || !IsHex8(dotted.substr(prefix.size()))) {
      continue;
    }
    const MethodDef* bomb = cls.FindMethod(BombSig(desc));
    if (bomb && bomb->is_static()) out.push_back(&cls);
  }
  return out;
}

ValidationCheck CheckCallsite(const AppBundle& bundle, const LabelRecord& r,
                              const std::vector<const ClassDef*>& bombs) {
  ValidationCheck c{"callsite", false, ""};
  MethodSig host;
  try {
    host = ParseMethodInfected(r.method_infected,
                               TypeDescriptor::FromDottedName(r.class_infected));
  } catch (const Error& e) {
    c.detail = e.what();
    return c;
  }
  const MethodDef* m = bundle.FindMethod(host);
  if (!m) {
    c.detail = "host method " + host.ref() + " not found";
    return c;
  }
  std::size_t entry = m->entry_index();
  if (entry >= m->body.size()) {
    c.detail = "host method has no code";
    return c;
  }
  const Instruction& first = m->body[entry];
  for (const ClassDef* cls : bombs) {
    if (first.invoke && first.invoke->dispatch == Dispatch::kStatic &&
        first.invoke->target == BombSig(cls->descriptor)) {
      c.passed = true;
      c.detail = "entry of " + host.ref() + " calls " +
                 first.invoke->target.ref();
      return c;
    }
  }
  c.detail = "entry of " + host.ref() + " is '" + first.text + "'";
  return c;
}

ValidationCheck CheckPermissions(const AppBundle& bundle, const LabelRecord& r,
                                 const std::optional<AppBundle>& original) {
  ValidationCheck c{"permissions", false, ""};
  auto needed = PayloadPermissions(r.trigger_type, r.guarded_code_type);
  for (const auto& p : needed) {
    if (!bundle.manifest.HasPermission(p)) {
      c.detail = "missing " + p;
      return c;
    }
  }
  if (original) {
    std::set<std::string> expected;
    for (const auto& p : needed) {
      if (!original->manifest.HasPermission(p)) expected.insert(p);
    }
    std::set<std::string> added;
    for (const auto& p : bundle.manifest.permissions) {
      if (!original->manifest.HasPermission(p)) added.insert(p);
    }
    if (added != expected) {
      c.detail = "added " + std::to_string(added.size()) +
                 " permissions, expected " + std::to_string(expected.size());
      return c;
    }
  }
  c.passed = true;
  c.detail = std::to_string(needed.size()) + " payload permissions present";
  return c;
}

ValidationCheck CheckNativeStubs(const AppBundle& bundle, const LabelRecord& r) {
  ValidationCheck c{"native_stubs", false, ""};
  if (!IsNative(r.guarded_code_type)) {
    c.passed = true;
    c.detail = "not a native payload";
    return c;
  }
  const std::string want = NativeStubContent(r.guarded_code_type);
  for (std::string_view abi : kNativeAbis) {
    auto it = bundle.native_libs.find(
        {std::string(abi), std::string(kNativeLibraryFile)});
    if (it == bundle.native_libs.end()) {
      c.detail = "missing lib/" + std::string(abi) + "/" +
                 std::string(kNativeLibraryFile);
      return c;
    }
    if (it->second != want) {
      c.detail = "unexpected stub content for " + std::string(abi);
      return c;
    }
  }
  c.passed = true;
  c.detail = "stubs present for " + std::to_string(kNativeAbis.size()) + " ABIs";
  return c;
}

}  // namespace

bool ValidationReport::ok() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::Find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport Validate(const std::filesystem::path& infected_dir,
                          const LabelRecord& record,
                          const std::optional<std::filesystem::path>& original_dir) {
  ValidationReport report;
  AppBundle bundle;
  std::optional<AppBundle> original;
  try {
    bundle = ParseApp(infected_dir);
    if (original_dir) original = ParseApp(*original_dir);
  } catch (const Error& e) {
    report.checks.push_back({"parse", false, e.what()});
    return report;
  }

  auto bombs = BombClasses(bundle);
  ValidationCheck bomb{"bomb_class", bombs.size() == 1, ""};
  if (bombs.size() == 1) {
    bomb.detail = bombs.front()->descriptor.dotted_name();
  } else {
    bomb.detail = std::to_string(bombs.size()) + " generated classes found";
  }
  report.checks.push_back(std::move(bomb));
  report.checks.push_back(CheckCallsite(bundle, record, bombs));
  report.checks.push_back(CheckPermissions(bundle, record, original));
  report.checks.push_back(CheckNativeStubs(bundle, record));
  return report;
}

}  // namespace triggerforge
