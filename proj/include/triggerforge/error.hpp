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

#ifndef TRIGGERFORGE_ERROR_HPP_
#define TRIGGERFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace triggerforge {

enum class ErrorKind {
  // ir
  kMalformedHeader,
  kUnbalancedMethod,
  kBadDescriptor,
  kBadInvoke,
  kMissingManifest,
  kMalformedManifest,
  kDuplicateClass,
  kIoFailure,
  // callgraph
  kCyclicHierarchy,
  kNotInGraph,
  // insertion / payload
  kNoInsertionPoint,
  kNameCollision,
  kMethodNotFound,
  kApiLevel,
  // packaging
  kStubCollision,
  // corpus / eval
  kSchemaMismatch,
  kUnknownApp,
  kDuplicateVerdict,
};

std::string_view ErrorKindName(ErrorKind kind);

/// Exception carrying a machine-checkable kind. All library failures are
/// reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace triggerforge

#endif  // TRIGGERFORGE_ERROR_HPP_
