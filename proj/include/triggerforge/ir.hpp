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

#ifndef TRIGGERFORGE_IR_HPP_
#define TRIGGERFORGE_IR_HPP_

// Text IR for disassembled app bundles.
//
// Class files use a smali-compatible subset. Only `.class`, `.super`,
// `.implements`, `.method`, `.end method`, `.registers` and `invoke-*` lines
// are interpreted; every other line (fields, annotations, labels, opcodes we
// do not model) is carried verbatim so that emit(parse(t)) == normalize(t).

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace triggerforge {

/// A JVM-style type descriptor: `I`, `V`, `[B`, `Lcom/app/Main;`.
class TypeDescriptor {
 public:
  TypeDescriptor() = default;

  /// Throws Error{kBadDescriptor} if `raw` is not a single descriptor.
  static TypeDescriptor Parse(std::string_view raw);
  /// `com.app.Main` -> `Lcom/app/Main;`.
  static TypeDescriptor FromDottedName(std::string_view dotted);

  const std::string& raw() const { return raw_; }
  bool is_class() const { return !raw_.empty() && raw_.front() == 'L'; }
  bool is_array() const { return !raw_.empty() && raw_.front() == '['; }

  /// `com/app/Main` for class descriptors; empty otherwise.
  std::string binary_name() const;
  /// `com.app.Main` for class descriptors; empty otherwise.
  std::string dotted_name() const;

  friend bool operator==(const TypeDescriptor&, const TypeDescriptor&) = default;
  friend auto operator<=>(const TypeDescriptor&,
                          const TypeDescriptor&) = default;

 private:
  explicit TypeDescriptor(std::string raw) : raw_(std::move(raw)) {}
  std::string raw_;
};

/// Splits a concatenated parameter list such as `IJLjava/lang/String;[B`.
std::vector<TypeDescriptor> ParseDescriptorList(std::string_view list);

struct MethodSig {
  TypeDescriptor owner;
  std::string name;
  std::vector<TypeDescriptor> params;
  TypeDescriptor ret;

  /// `(ILjava/lang/String;)V`
  std::string descriptor() const;
  /// `name(ILjava/lang/String;)V`; identical across overriding classes.
  std::string sub_signature() const;
  /// `Lcom/app/Main;->name(I)V`
  std::string ref() const;
  /// Concatenated raw parameter descriptors.
  std::string raw_params() const;

  friend bool operator==(const MethodSig&, const MethodSig&) = default;
  /// Canonical total order: owner, name, raw params, return.
  friend std::strong_ordering operator<=>(const MethodSig& a,
                                          const MethodSig& b);
};

/// Parses `Lcom/app/Main;->name(I)V`.
MethodSig ParseMethodRef(std::string_view ref);

enum class Dispatch { kStatic, kVirtual, kDirect, kInterface, kSuper };

std::string_view DispatchName(Dispatch d);

struct InvokeDetail {
  Dispatch dispatch = Dispatch::kStatic;
  bool range = false;
  MethodSig target;

  friend bool operator==(const InvokeDetail&, const InvokeDetail&) = default;
};

struct Instruction {
  enum class Kind { kInvoke, kOpaque };

  Kind kind = Kind::kOpaque;
  std::string indent;
  std::string text;
  std::optional<InvokeDetail> invoke;

  /// `line` must already be normalized. Lines whose opcode starts with
  /// `invoke-` either parse fully or throw Error{kBadInvoke}.
  static Instruction Parse(std::string_view line);
  /// Parse of `indent + text`; used by code generators.
  static Instruction Line(std::string_view text,
                          std::string_view indent = "    ");

  std::string Emit() const { return indent + text; }

  /// True for executable opcode lines: not blank, comment, label or directive.
  bool is_opcode() const;
  bool is_label() const { return !text.empty() && text.front() == ':'; }
  /// First whitespace-delimited token of text.
  std::string_view opcode() const;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct MethodDef {
  MethodSig sig;
  std::vector<std::string> access_flags;
  std::uint32_t registers = 0;
  std::string header;      // verbatim `.method ...` line
  std::vector<Instruction> body;
  std::string end_line;    // verbatim `.end method` line

  /// Builds a method whose header/end lines are synthesized from the fields.
  static MethodDef Make(MethodSig sig, std::vector<std::string> access_flags,
                        std::vector<Instruction> body);

  bool is_static() const;
  /// Index into body of the first opcode or label that follows the leading
  /// directive/annotation prologue. Equals body.size() for empty bodies.
  std::size_t entry_index() const;
  /// The opcode lines of the body, in order.
  std::vector<const Instruction*> instructions() const;

  friend bool operator==(const MethodDef&, const MethodDef&) = default;
};

struct ClassDef {
  /// Top-level item: a verbatim line, or an index into `methods`.
  using Item = std::variant<std::string, std::size_t>;

  TypeDescriptor descriptor;
  TypeDescriptor superclass;
  std::vector<TypeDescriptor> interfaces;
  std::vector<std::string> access_flags;
  std::vector<MethodDef> methods;
  std::string source_path;
  std::vector<Item> items;
  bool trailing_newline = true;

  /// A class with header lines only. Methods are added with AddMethod.
  static ClassDef Make(TypeDescriptor descriptor, TypeDescriptor superclass,
                       std::vector<std::string> access_flags);

  void AddMethod(MethodDef method);
  const MethodDef* FindMethod(const MethodSig& sig) const;
  MethodDef* FindMethod(const MethodSig& sig);
  /// Top-level lines that are not class/super/implements headers (fields,
  /// annotations, comments), joined with newlines.
  std::string fields_raw() const;

  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

/// CRLF/CR -> LF and strip trailing spaces and tabs from every line.
std::string NormalizeText(std::string_view text);

ClassDef ParseClass(std::string_view text, std::string source_path = {});
std::string EmitClass(const ClassDef& c);

/// `smali/com/app/Main.smali` for `Lcom/app/Main;`.
std::string DefaultSourcePath(const TypeDescriptor& descriptor);

enum class ComponentKind { kActivity, kService, kReceiver, kProvider };

std::string_view ComponentKindName(ComponentKind kind);

struct Component {
  ComponentKind kind;
  std::string class_name;  // dotted, fully qualified

  friend bool operator==(const Component&, const Component&) = default;
};

struct Manifest {
  std::string package;
  std::vector<std::string> permissions;  // declaration order, deduplicated
  std::vector<Component> components;
  std::optional<int> min_sdk;
  std::optional<int> target_sdk;
  std::string raw_text;

  /// Throws Error{kMalformedManifest} when no `<manifest package=...>`.
  static Manifest Parse(std::string text);

  bool HasPermission(std::string_view name) const;
  const Component* FindComponent(std::string_view dotted_class) const;
};

using NativeLibKey = std::pair<std::string, std::string>;  // (abi, filename)

struct AppBundle {
  std::string package_name;
  Manifest manifest;
  std::map<TypeDescriptor, ClassDef> classes;
  std::map<NativeLibKey, std::string> native_libs;
  /// Files outside the modeled layout, kept as opaque bytes.
  std::map<std::string, std::string> other_files;
  std::filesystem::path root;

  const ClassDef* FindClass(const TypeDescriptor& d) const;
  const MethodDef* FindMethod(const MethodSig& sig) const;
};

AppBundle ParseApp(const std::filesystem::path& root);

/// The emitted file set: `/`-separated relative path -> bytes.
std::map<std::string, std::string> BundleFiles(const AppBundle& bundle);

/// Writes the bundle under `out`, which must be absent or empty.
void EmitApp(const AppBundle& bundle, const std::filesystem::path& out);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view bytes);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_IR_HPP_
