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

#include "triggerforge/insertion.hpp"

#include <algorithm>
#include <iterator>

#include "triggerforge/error.hpp"

namespace triggerforge {

std::string_view ComponentTypeName(ComponentType t) {
  switch (t) {
    case ComponentType::kActivity: return "Activity";
    case ComponentType::kService: return "Service";
    case ComponentType::kReceiver: return "Receiver";
    case ComponentType::kProvider: return "Provider";
    case ComponentType::kOther: return "Other";
  }
  return "Other";
}

std::optional<ComponentType> ComponentTypeFromName(std::string_view name) {
  for (auto t : {ComponentType::kActivity, ComponentType::kService,
                 ComponentType::kReceiver, ComponentType::kProvider,
                 ComponentType::kOther}) {
    if (ComponentTypeName(t) == name) return t;
  }
  return std::nullopt;
}

bool IsDeveloperClass(std::string_view dotted_class, std::string_view package) {
  if (!dotted_class.starts_with(package)) return false;
  return dotted_class.size() == package.size() ||
         dotted_class[package.size()] == '.';
}

std::set<MethodSig> DeveloperMethods(const AppBundle& bundle) {
  std::set<MethodSig> out;
  for (const auto& [d, c] : bundle.classes) {
    if (!IsDeveloperClass(d.dotted_name(), bundle.package_name)) continue;
    for (const auto& m : c.methods) {
      bool no_code = std::any_of(
          m.access_flags.begin(), m.access_flags.end(),
          [](const std::string& f) { return f == "abstract" || f == "native"; });
      if (!no_code) out.insert(m.sig);
    }
  }
  return out;
}

std::set<MethodSig> CandidateMethods(const std::set<MethodSig>& methods,
                                     const CallGraph& g) {
  std::set<MethodSig> out;
  std::set_intersection(methods.begin(), methods.end(), g.nodes.begin(),
                        g.nodes.end(), std::inserter(out, out.end()));
  return out;
}

ComponentType ResolveComponentType(const AppBundle& bundle,
                                   const ClassHierarchy& h,
                                   const TypeDescriptor& cls) {
  for (const auto& type : h.SuperChain(cls)) {
    if (!type.is_class()) break;
    if (const Component* c = bundle.manifest.FindComponent(type.dotted_name())) {
      switch (c->kind) {
        case ComponentKind::kActivity: return ComponentType::kActivity;
        case ComponentKind::kService: return ComponentType::kService;
        case ComponentKind::kReceiver: return ComponentType::kReceiver;
        case ComponentKind::kProvider: return ComponentType::kProvider;
      }
    }
  }
  return ComponentType::kOther;
}

InsertionPoint ChooseInsertionPoint(const std::set<MethodSig>& candidates,
                                    const CallGraph& g,
                                    const ClassHierarchy& h,
                                    const AppBundle& bundle, Rng& rng) {
  if (candidates.empty()) {
    throw Error(ErrorKind::kNoInsertionPoint,
                "no reachable developer method in " + bundle.package_name);
  }
  // std::set iterates in MethodSig's canonical order.
  auto it = candidates.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(rng.Uniform(candidates.size())));
  InsertionPoint ip;
  ip.method = *it;
  ip.class_descriptor = it->owner;
  ip.component_type = ResolveComponentType(bundle, h, it->owner);
  ip.depths = Depths(g, *it);
  return ip;
}

}  // namespace triggerforge
