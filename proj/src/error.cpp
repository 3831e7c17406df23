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

#include "triggerforge/error.hpp"

namespace triggerforge {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedHeader: return "MalformedHeader";
    case ErrorKind::kUnbalancedMethod: return "UnbalancedMethod";
    case ErrorKind::kBadDescriptor: return "BadDescriptor";
    case ErrorKind::kBadInvoke: return "BadInvoke";
    case ErrorKind::kMissingManifest: return "MissingManifest";
    case ErrorKind::kMalformedManifest: return "MalformedManifest";
    case ErrorKind::kDuplicateClass: return "DuplicateClass";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kCyclicHierarchy: return "CyclicHierarchy";
    case ErrorKind::kNotInGraph: return "NotInGraph";
    case ErrorKind::kNoInsertionPoint: return "NoInsertionPoint";
    case ErrorKind::kNameCollision: return "NameCollision";
    case ErrorKind::kMethodNotFound: return "MethodNotFound";
    case ErrorKind::kApiLevel: return "ApiLevel";
    case ErrorKind::kStubCollision: return "StubCollision";
    case ErrorKind::kSchemaMismatch: return "SchemaMismatch";
    case ErrorKind::kUnknownApp: return "UnknownApp";
    case ErrorKind::kDuplicateVerdict: return "DuplicateVerdict";
  }
  return "Unknown";
}

}  // namespace triggerforge
