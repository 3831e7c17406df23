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

#ifndef TRIGGERFORGE_CALLGRAPH_HPP_
#define TRIGGERFORGE_CALLGRAPH_HPP_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "triggerforge/ir.hpp"

namespace triggerforge {

struct ClassHierarchy {
  /// Bundle class -> declared superclass (which may be external).
  std::map<TypeDescriptor, TypeDescriptor> parents;
  /// Bundle class -> declared interfaces.
  std::map<TypeDescriptor, std::vector<TypeDescriptor>> interfaces;
  /// Type -> every bundle-defined class that transitively extends or
  /// implements it (the type itself excluded). Keys may be external.
  std::map<TypeDescriptor, std::set<TypeDescriptor>> subtypes;
  /// Types referenced as a supertype but not defined in the bundle.
  std::set<TypeDescriptor> externals;

  /// `d` followed by its superclasses, stopping after the first external.
  std::vector<TypeDescriptor> SuperChain(const TypeDescriptor& d) const;
  const std::set<TypeDescriptor>& SubtypesOf(const TypeDescriptor& d) const;
};

/// Throws Error{kCyclicHierarchy} on an extension cycle inside the bundle.
ClassHierarchy BuildHierarchy(const AppBundle& bundle);

/// Lifecycle method names the framework invokes for a component kind.
const std::set<std::string>& LifecycleWhitelist(ComponentKind kind);

struct EntryPoints {
  std::set<MethodSig> methods;
  /// Manifest components whose class is not defined in the bundle.
  std::vector<std::string> warnings;
};

EntryPoints ComputeEntryPoints(const AppBundle& bundle,
                               const ClassHierarchy& h);

/// An invoke edge; an empty callee is the external sink.
struct CallEdge {
  MethodSig caller;
  std::optional<MethodSig> callee;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
  friend auto operator<=>(const CallEdge&, const CallEdge&) = default;
};

struct CallGraph {
  std::set<MethodSig> nodes;
  std::set<CallEdge> edges;
  std::set<MethodSig> entry_points;

  bool Contains(const MethodSig& m) const { return nodes.contains(m); }
};

/// Bundle-defined targets an invoke may reach under class-hierarchy
/// analysis. Empty means the call leaves the bundle.
std::set<MethodSig> ResolveInvoke(const AppBundle& bundle,
                                  const ClassHierarchy& h,
                                  const InvokeDetail& invoke);

CallGraph BuildCallGraph(const AppBundle& bundle, const ClassHierarchy& h,
                         const std::set<MethodSig>& entry_points);
CallGraph BuildCallGraph(const AppBundle& bundle, const ClassHierarchy& h);

/// Distinct shortest-path lengths from each entry point that reaches `m`,
/// ascending. Throws Error{kNotInGraph} when m is not a node.
std::vector<int> Depths(const CallGraph& g, const MethodSig& m);

/// `caller -> callee` per edge, sorted; the external sink prints as
/// `<external>`.
std::string DumpEdges(const CallGraph& g);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_CALLGRAPH_HPP_
