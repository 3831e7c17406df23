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

#ifndef TRIGGERFORGE_INSERTION_HPP_
#define TRIGGERFORGE_INSERTION_HPP_

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "triggerforge/callgraph.hpp"
#include "triggerforge/ir.hpp"
#include "triggerforge/rng.hpp"

namespace triggerforge {

enum class ComponentType { kActivity, kService, kReceiver, kProvider, kOther };

std::string_view ComponentTypeName(ComponentType t);
std::optional<ComponentType> ComponentTypeFromName(std::string_view name);

struct InsertionPoint {
  MethodSig method;
  TypeDescriptor class_descriptor;
  ComponentType component_type = ComponentType::kOther;
  std::vector<int> depths;
};

/// True when the dotted class name equals the package or starts with
/// `package + "."`.
bool IsDeveloperClass(std::string_view dotted_class, std::string_view package);

/// Methods with code (neither abstract nor native) declared in developer
/// classes.
std::set<MethodSig> DeveloperMethods(const AppBundle& bundle);

/// Developer methods that are nodes of the callgraph.
std::set<MethodSig> CandidateMethods(const std::set<MethodSig>& methods,
                                     const CallGraph& g);

/// Nearest class on the superclass chain (self included) registered in the
/// manifest decides the component type.
ComponentType ResolveComponentType(const AppBundle& bundle,
                                   const ClassHierarchy& h,
                                   const TypeDescriptor& cls);

/// Uniform draw over `candidates` in canonical order. Throws
/// Error{kNoInsertionPoint} when empty.
InsertionPoint ChooseInsertionPoint(const std::set<MethodSig>& candidates,
                                    const CallGraph& g,
                                    const ClassHierarchy& h,
                                    const AppBundle& bundle, Rng& rng);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_INSERTION_HPP_
