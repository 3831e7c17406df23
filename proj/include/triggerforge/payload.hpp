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

#ifndef TRIGGERFORGE_PAYLOAD_HPP_
#define TRIGGERFORGE_PAYLOAD_HPP_

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triggerforge/insertion.hpp"
#include "triggerforge/ir.hpp"
#include "triggerforge/rng.hpp"

namespace triggerforge {

enum class TriggerType {
  kTime,
  kLocation,
  kSms,
  kNetwork,
  kBuild,
  kCamera,
  kAddition,
  kMusic,
  kIsScreenOn,
  kIsScreenOff,
};

enum class GuardedCodeType {
  kReturn,
  kSmsImei,
  kStopWifi,
  kWriteString,
  kWritePhoneNumber,
  kSetText,
  kSmsString,
  kHttpLocation,
  kSetTextReflection,
  kExit,
  kNativeLogString,
  kNativeLogModel,
  kNativeWritePhoneNumber,
  kNativePhoneNumberNetwork,
};

struct TriggerInfo {
  TriggerType type;
  std::string_view name;
  std::string_view description;
};

struct GuardedInfo {
  GuardedCodeType type;
  std::string_view name;
  std::string_view description;
  bool malicious;
};

std::span<const TriggerInfo, 10> AllTriggers();
std::span<const GuardedInfo, 14> AllGuarded();

std::string_view TriggerName(TriggerType t);
std::string_view GuardedName(GuardedCodeType g);
std::optional<TriggerType> TriggerFromName(std::string_view name);
std::optional<GuardedCodeType> GuardedFromName(std::string_view name);
bool IsMalicious(GuardedCodeType g);
bool IsNative(GuardedCodeType g);

/// Permissions the guarded code needs, in manifest insertion order.
std::vector<std::string> RequiredPermissions(GuardedCodeType g);
/// Permissions the trigger condition needs.
std::vector<std::string> TriggerPermissions(TriggerType t);
/// Guarded permissions followed by any trigger permission not yet listed.
std::vector<std::string> PayloadPermissions(TriggerType t, GuardedCodeType g);

/// A framework API whose presence in generated code is significant.
/// `pattern` is matched as a substring of an instruction line.
struct ApiAnchor {
  std::string_view pattern;
  bool trigger;  // used to compute a trigger condition
  bool sink;     // used by guarded code
  std::vector<std::string_view> permissions;
  int min_api;
};

std::span<const ApiAnchor> ApiAnchors();

/// Union of anchor permissions over every line of `code`.
std::set<std::string> PermissionsImpliedBy(
    std::span<const Instruction> code);

/// Lowest Android API level at which every anchor the payload uses exists.
int RequiredApiLevel(TriggerType t, GuardedCodeType g);

inline constexpr std::array<std::string_view, 2> kNativeAbis = {
    "armeabi-v7a", "arm64-v8a"};
inline constexpr std::string_view kNativeLibraryFile = "libtriggerzoo.so";
inline constexpr std::string_view kNativeLibraryName = "triggerzoo";

/// Fresh labels for one generated method; the condition register holds the
/// trigger's boolean result.
class GenContext {
 public:
  explicit GenContext(TypeDescriptor bomb_class)
      : bomb_class_(std::move(bomb_class)) {}

  const TypeDescriptor& bomb_class() const { return bomb_class_; }
  std::string Label(std::string_view stem);
  static constexpr std::string_view kCondRegister = "v7";
  static constexpr std::uint32_t kRegisters = 8;

 private:
  TypeDescriptor bomb_class_;
  int next_label_ = 0;
};

struct CodeBlock {
  std::vector<Instruction> lines;
  /// Declarations the block calls into (native methods on the bomb class).
  std::vector<MethodDef> methods;
};

CodeBlock GenerateTrigger(TriggerType t, GenContext& ctx);
CodeBlock GenerateGuarded(GuardedCodeType g, GenContext& ctx);

struct NativeRequirement {
  std::string abi;
  std::string filename;

  friend auto operator<=>(const NativeRequirement&,
                          const NativeRequirement&) = default;
};

struct PayloadSpec {
  TriggerType trigger;
  GuardedCodeType guarded;
  TypeDescriptor bomb_class;
  MethodSig bomb_method;
  std::vector<std::string> permissions;
  std::set<NativeRequirement> native_reqs;
  bool malicious = false;
};

struct PayloadClass {
  ClassDef class_def;
  std::vector<Instruction> callsite;
};

struct Payload {
  PayloadClass code;
  PayloadSpec spec;
};

/// Builds `<package>/gen/Zoo<8 hex>` with a static `bomb()V` laid out as
/// trigger -> if-eqz cond :end -> guarded -> :end return-void.
/// Throws Error{kNameCollision} after 16 colliding names.
Payload AssemblePayload(TriggerType t, GuardedCodeType g,
                        const AppBundle& bundle, Rng& rng);

/// Adds the payload class and puts the callsite at the entry of the host
/// method. Throws Error{kMethodNotFound} or Error{kNameCollision}.
AppBundle Inject(const AppBundle& bundle, const InsertionPoint& ip,
                 const PayloadClass& payload);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_PAYLOAD_HPP_
