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

#include "triggerforge/callgraph.hpp"

#include <algorithm>
#include <deque>

#include "triggerforge/error.hpp"

namespace triggerforge {
namespace {

bool IsAbstract(const MethodDef& m) {
  return std::find(m.access_flags.begin(), m.access_flags.end(), "abstract") !=
         m.access_flags.end();
}

// Virtual-dispatch lookup for a receiver of exact type `receiver`: the first
// declaration of `sub_signature` up the superclass chain.
std::optional<MethodSig> LookupDispatch(const AppBundle& bundle,
                                  const ClassHierarchy& h,
                                  const TypeDescriptor& receiver,
                                  const MethodSig& declared) {
  for (const auto& type : h.SuperChain(receiver)) {
    const ClassDef* c = bundle.FindClass(type);
    if (c == nullptr) return std::nullopt;
    MethodSig probe = declared;
    probe.owner = type;
    if (const MethodDef* m = c->FindMethod(probe)) {
      if (IsAbstract(*m)) return std::nullopt;
      return probe;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<TypeDescriptor> ClassHierarchy::SuperChain(
    const TypeDescriptor& d) const {
  std::vector<TypeDescriptor> chain{d};
  auto it = parents.find(d);
  while (it != parents.end()) {
    chain.push_back(it->second);
    // BuildHierarchy rejects cycles, so this terminates.
    it = parents.find(it->second);
  }
  return chain;
}

const std::set<TypeDescriptor>& ClassHierarchy::SubtypesOf(
    const TypeDescriptor& d) const {
  static const std::set<TypeDescriptor> kEmpty;
  auto it = subtypes.find(d);
  return it == subtypes.end() ? kEmpty : it->second;
}

ClassHierarchy BuildHierarchy(const AppBundle& bundle) {
  ClassHierarchy h;
  for (const auto& [d, c] : bundle.classes) {
    h.parents.emplace(d, c.superclass);
    h.interfaces.emplace(d, c.interfaces);
    auto note_external = [&](const TypeDescriptor& t) {
      if (!bundle.classes.contains(t)) h.externals.insert(t);
    };
    note_external(c.superclass);
    for (const auto& i : c.interfaces) note_external(i);
  }
  // Walk every class's supertypes; reaching the class itself is a cycle.
  for (const auto& [d, c] : bundle.classes) {
    std::set<TypeDescriptor> seen;
    std::deque<TypeDescriptor> work;
    auto push_supers = [&](const TypeDescriptor& t) {
      auto p = h.parents.find(t);
      if (p == h.parents.end()) return;
      work.push_back(p->second);
      for (const auto& i : h.interfaces.at(t)) work.push_back(i);
    };
    push_supers(d);
    while (!work.empty()) {
      TypeDescriptor t = std::move(work.front());
      work.pop_front();
      if (t == d) {
        throw Error(ErrorKind::kCyclicHierarchy,
                    "class " + d.raw() + " transitively extends itself");
      }
      if (!seen.insert(t).second) continue;
      h.subtypes[t].insert(d);
      push_supers(t);
    }
  }
  return h;
}

const std::set<std::string>& LifecycleWhitelist(ComponentKind kind) {
  static const std::set<std::string> kActivity = {
      "onCreate", "onStart", "onResume", "onPause",
      "onStop",   "onDestroy", "onRestart"};
  static const std::set<std::string> kService = {"onCreate", "onStartCommand",
                                                 "onBind", "onDestroy"};
  static const std::set<std::string> kReceiver = {"onReceive"};
  static const std::set<std::string> kProvider = {"onCreate"};
  switch (kind) {
    case ComponentKind::kActivity: return kActivity;
    case ComponentKind::kService: return kService;
    case ComponentKind::kReceiver: return kReceiver;
    case ComponentKind::kProvider: return kProvider;
  }
  return kProvider;
}

EntryPoints ComputeEntryPoints(const AppBundle& bundle,
                               const ClassHierarchy& h) {
  EntryPoints out;
  for (const Component& component : bundle.manifest.components) {
    TypeDescriptor d = TypeDescriptor::FromDottedName(component.class_name);
    if (!bundle.classes.contains(d)) {
      out.warnings.push_back(std::string(ComponentKindName(component.kind)) +
                             " " + component.class_name +
                             " is not defined in the bundle");
      continue;
    }
    const auto& names = LifecycleWhitelist(component.kind);
    std::set<TypeDescriptor> classes = h.SubtypesOf(d);
    classes.insert(d);
    for (const auto& type : classes) {
      for (const MethodDef& m : bundle.classes.at(type).methods) {
        if (names.contains(m.sig.name)) out.methods.insert(m.sig);
      }
    }
  }
  return out;
}

std::set<MethodSig> ResolveInvoke(const AppBundle& bundle,
                                  const ClassHierarchy& h,
                                  const InvokeDetail& invoke) {
  std::set<MethodSig> targets;
  const MethodSig& declared = invoke.target;
  switch (invoke.dispatch) {
    case Dispatch::kStatic:
    case Dispatch::kDirect:
    case Dispatch::kSuper:
      if (auto t = LookupDispatch(bundle, h, declared.owner, declared)) {
        targets.insert(*t);
      }
      break;
    case Dispatch::kVirtual:
    case Dispatch::kInterface: {
      if (auto t = LookupDispatch(bundle, h, declared.owner, declared)) {
        targets.insert(*t);
      }
      for (const auto& sub : h.SubtypesOf(declared.owner)) {
        if (auto t = LookupDispatch(bundle, h, sub, declared)) targets.insert(*t);
      }
      break;
    }
  }
  return targets;
}

CallGraph BuildCallGraph(const AppBundle& bundle, const ClassHierarchy& h,
                         const std::set<MethodSig>& entry_points) {
  CallGraph g;
  g.entry_points = entry_points;
  std::deque<MethodSig> work(entry_points.begin(), entry_points.end());
  g.nodes = entry_points;
  while (!work.empty()) {
    MethodSig caller = std::move(work.front());
    work.pop_front();
    const MethodDef* m = bundle.FindMethod(caller);
    if (m == nullptr) continue;
    for (const Instruction& ins : m->body) {
      if (!ins.invoke) continue;
      std::set<MethodSig> targets = ResolveInvoke(bundle, h, *ins.invoke);
      if (targets.empty()) {
        g.edges.insert({caller, std::nullopt});
        continue;
      }
      for (const auto& t : targets) {
        g.edges.insert({caller, t});
        if (g.nodes.insert(t).second) work.push_back(t);
      }
    }
  }
  return g;
}

CallGraph BuildCallGraph(const AppBundle& bundle, const ClassHierarchy& h) {
  return BuildCallGraph(bundle, h, ComputeEntryPoints(bundle, h).methods);
}

std::vector<int> Depths(const CallGraph& g, const MethodSig& m) {
  if (!g.Contains(m)) {
    throw Error(ErrorKind::kNotInGraph, m.ref() + " is not in the callgraph");
  }
  std::map<MethodSig, std::vector<const MethodSig*>> callers;
  for (const auto& e : g.edges) {
    if (e.callee) callers[*e.callee].push_back(&e.caller);
  }
  // Reverse BFS gives the distance from every caller to m in one pass.
  std::map<MethodSig, int> dist{{m, 0}};
  std::deque<const MethodSig*> work{&m};
  while (!work.empty()) {
    const MethodSig* cur = work.front();
    work.pop_front();
    int d = dist.at(*cur);
    auto it = callers.find(*cur);
    if (it == callers.end()) continue;
    for (const MethodSig* c : it->second) {
      if (dist.emplace(*c, d + 1).second) work.push_back(c);
    }
  }
  std::set<int> depths;
  for (const auto& e : g.entry_points) {
    if (auto it = dist.find(e); it != dist.end()) depths.insert(it->second);
  }
  return {depths.begin(), depths.end()};
}

std::string DumpEdges(const CallGraph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    lines.push_back(e.caller.ref() + " -> " +
                    (e.callee ? e.callee->ref() : std::string("<external>")));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace triggerforge
