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
#include <charconv>
#include <sstream>

#include "triggerforge/error.hpp"
#include "triggerforge/ir.hpp"

namespace triggerforge {
namespace {

constexpr std::string_view kPrimitiveCodes = "ZBSCIJFDV";

bool IsSpace(char c) { return c == ' ' || c == '\t'; }

std::string_view TrimLeft(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && IsSpace(s[i])) ++i;
  return s.substr(i);
}

std::string_view Trim(std::string_view s) {
  s = TrimLeft(s);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitWords(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !IsSpace(s[i])) ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

bool StartsWithWord(std::string_view text, std::string_view word) {
  return text.starts_with(word) &&
         (text.size() == word.size() || IsSpace(text[word.size()]));
}

bool IsBinaryNameChar(char c) {
  return c != ';' && c != '.' && c != '(' && c != ')' && c != '[' &&
         !IsSpace(c) && c != '\n' && c != ',' && c != '{' && c != '}';
}

// Returns the end offset of the descriptor starting at `pos`, or npos.
std::size_t ScanDescriptor(std::string_view s, std::size_t pos,
                           bool allow_void) {
  std::size_t dims = 0;
  while (pos < s.size() && s[pos] == '[') {
    ++pos;
    ++dims;
  }
  if (pos >= s.size() || dims > 255) return std::string_view::npos;
  char c = s[pos];
  if (c == 'L') {
    std::size_t end = s.find(';', pos);
    if (end == std::string_view::npos || end == pos + 1) {
      return std::string_view::npos;
    }
    std::string_view name = s.substr(pos + 1, end - pos - 1);
    if (!std::all_of(name.begin(), name.end(), IsBinaryNameChar) ||
        name.front() == '/' || name.back() == '/' ||
        name.find("//") != std::string_view::npos) {
      return std::string_view::npos;
    }
    return end + 1;
  }
  if (kPrimitiveCodes.find(c) == std::string_view::npos) {
    return std::string_view::npos;
  }
  if (c == 'V' && (dims > 0 || !allow_void)) return std::string_view::npos;
  return pos + 1;
}

bool IsDataBlockStart(std::string_view text, std::string_view* name) {
  static constexpr std::string_view kBlocks[] = {
      "annotation", "subannotation", "array-data", "packed-switch",
      "sparse-switch"};
  for (std::string_view block : kBlocks) {
    if (text.size() > block.size() && text[0] == '.' &&
        text.substr(1, block.size()) == block &&
        (text.size() == block.size() + 1 || IsSpace(text[block.size() + 1]))) {
      *name = block;
      return true;
    }
  }
  return false;
}

bool IsDataBlockEnd(std::string_view text, std::string_view name) {
  return text.starts_with(".end ") && Trim(text.substr(5)) == name;
}

std::optional<std::uint32_t> ParseRegisterCount(std::string_view text) {
  auto words = SplitWords(text);
  if (words.size() < 2) return std::nullopt;
  std::string_view digits = words[1];
  int base = 10;
  if (digits.starts_with("0x")) {
    digits.remove_prefix(2);
    base = 16;
  }
  std::uint32_t value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return value;
}

MethodSig ParseMethodHeader(std::string_view text, const TypeDescriptor& owner,
                            std::vector<std::string>* flags) {
  auto words = SplitWords(text);
  if (words.size() < 2) {
    throw Error(ErrorKind::kBadDescriptor,
                "method header without name: " + std::string(text));
  }
  for (std::size_t i = 1; i + 1 < words.size(); ++i) {
    flags->emplace_back(words[i]);
  }
  std::string ref = owner.raw() + "->" + std::string(words.back());
  return ParseMethodRef(ref);
}

}  // namespace

// --- TypeDescriptor --------------------------------------------------------

TypeDescriptor TypeDescriptor::Parse(std::string_view raw) {
  if (ScanDescriptor(raw, 0, true) != raw.size()) {
    throw Error(ErrorKind::kBadDescriptor,
                "invalid type descriptor '" + std::string(raw) + "'");
  }
  return TypeDescriptor(std::string(raw));
}

TypeDescriptor TypeDescriptor::FromDottedName(std::string_view dotted) {
  std::string raw = "L";
  for (char c : dotted) raw.push_back(c == '.' ? '/' : c);
  raw.push_back(';');
  return Parse(raw);
}

std::string TypeDescriptor::binary_name() const {
  if (!is_class()) return {};
  return raw_.substr(1, raw_.size() - 2);
}

std::string TypeDescriptor::dotted_name() const {
  std::string name = binary_name();
  std::replace(name.begin(), name.end(), '/', '.');
  return name;
}

std::vector<TypeDescriptor> ParseDescriptorList(std::string_view list) {
  std::vector<TypeDescriptor> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    std::size_t end = ScanDescriptor(list, pos, false);
    if (end == std::string_view::npos) {
      throw Error(ErrorKind::kBadDescriptor,
                  "invalid parameter list '" + std::string(list) + "'");
    }
    out.push_back(TypeDescriptor::Parse(list.substr(pos, end - pos)));
    pos = end;
  }
  return out;
}

// --- MethodSig -------------------------------------------------------------

std::string MethodSig::raw_params() const {
  std::string out;
  for (const auto& p : params) out += p.raw();
  return out;
}

std::string MethodSig::descriptor() const {
  return "(" + raw_params() + ")" + ret.raw();
}

std::string MethodSig::sub_signature() const { return name + descriptor(); }

std::string MethodSig::ref() const {
  return owner.raw() + "->" + sub_signature();
}

std::strong_ordering operator<=>(const MethodSig& a, const MethodSig& b) {
  if (auto c = a.owner.raw() <=> b.owner.raw(); c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.raw_params() <=> b.raw_params(); c != 0) return c;
  return a.ret.raw() <=> b.ret.raw();
}

MethodSig ParseMethodRef(std::string_view ref) {
  auto bad = [&] {
    return Error(ErrorKind::kBadDescriptor,
                 "invalid method reference '" + std::string(ref) + "'");
  };
  std::size_t arrow = ref.find("->");
  if (arrow == std::string_view::npos) throw bad();
  std::size_t open = ref.find('(', arrow);
  std::size_t close = ref.find(')', arrow);
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open || open == arrow + 2) {
    throw bad();
  }
  MethodSig sig;
  sig.owner = TypeDescriptor::Parse(ref.substr(0, arrow));
  sig.name = std::string(ref.substr(arrow + 2, open - arrow - 2));
  if (sig.name.find_first_of(" \t;/") != std::string::npos) throw bad();
  sig.params = ParseDescriptorList(ref.substr(open + 1, close - open - 1));
  sig.ret = TypeDescriptor::Parse(ref.substr(close + 1));
  return sig;
}

std::string_view DispatchName(Dispatch d) {
  switch (d) {
    case Dispatch::kStatic: return "static";
    case Dispatch::kVirtual: return "virtual";
    case Dispatch::kDirect: return "direct";
    case Dispatch::kInterface: return "interface";
    case Dispatch::kSuper: return "super";
  }
  return "?";
}

// --- Instruction -----------------------------------------------------------

Instruction Instruction::Parse(std::string_view line) {
  Instruction ins;
  std::string_view text = TrimLeft(line);
  ins.indent = std::string(line.substr(0, line.size() - text.size()));
  ins.text = std::string(text);
  if (!text.starts_with("invoke-")) return ins;

  auto bad = [&](const std::string& why) {
    return Error(ErrorKind::kBadInvoke, why + ": " + std::string(text));
  };
  std::size_t op_end = 0;
  while (op_end < text.size() && !IsSpace(text[op_end])) ++op_end;
  std::string_view op = text.substr(0, op_end);
  InvokeDetail detail;
  if (op.ends_with("/range")) {
    detail.range = true;
    op.remove_suffix(6);
  }
  if (op == "invoke-static") {
    detail.dispatch = Dispatch::kStatic;
  } else if (op == "invoke-virtual" || op == "invoke-polymorphic") {
    detail.dispatch = Dispatch::kVirtual;
  } else if (op == "invoke-direct") {
    detail.dispatch = Dispatch::kDirect;
  } else if (op == "invoke-interface") {
    detail.dispatch = Dispatch::kInterface;
  } else if (op == "invoke-super") {
    detail.dispatch = Dispatch::kSuper;
  } else {
    throw bad("unsupported invoke opcode");
  }
  std::size_t lbrace = text.find('{', op_end);
  std::size_t rbrace = text.find('}', op_end);
  if (lbrace == std::string_view::npos || rbrace == std::string_view::npos ||
      rbrace < lbrace || !Trim(text.substr(op_end, lbrace - op_end)).empty()) {
    throw bad("missing register list");
  }
  std::string_view rest = TrimLeft(text.substr(rbrace + 1));
  if (!rest.starts_with(',')) throw bad("missing method reference");
  rest = TrimLeft(rest.substr(1));
  // invoke-polymorphic carries a trailing `, (proto)` after the reference.
  std::size_t ref_end = rest.find_first_of(", \t");
  std::string_view ref = rest.substr(0, ref_end);
  try {
    detail.target = ParseMethodRef(ref);
  } catch (const Error& e) {
    throw bad(e.what());
  }
  ins.kind = Kind::kInvoke;
  ins.invoke = std::move(detail);
  return ins;
}

Instruction Instruction::Line(std::string_view text, std::string_view indent) {
  return Parse(std::string(indent) + std::string(text));
}

bool Instruction::is_opcode() const {
  if (text.empty()) return false;
  char c = text.front();
  return c != '.' && c != ':' && c != '#';
}

std::string_view Instruction::opcode() const {
  std::string_view t = text;
  std::size_t end = 0;
  while (end < t.size() && !IsSpace(t[end])) ++end;
  return t.substr(0, end);
}

// --- MethodDef -------------------------------------------------------------

MethodDef MethodDef::Make(MethodSig sig, std::vector<std::string> access_flags,
                          std::vector<Instruction> body) {
  MethodDef m;
  m.header = ".method";
  for (const auto& f : access_flags) m.header += " " + f;
  m.header += " " + sig.sub_signature();
  m.end_line = ".end method";
  m.sig = std::move(sig);
  m.access_flags = std::move(access_flags);
  m.body = std::move(body);
  for (const auto& ins : m.body) {
    if (StartsWithWord(ins.text, ".registers")) {
      m.registers = ParseRegisterCount(ins.text).value_or(0);
    }
  }
  return m;
}

bool MethodDef::is_static() const {
  return std::find(access_flags.begin(), access_flags.end(), "static") !=
         access_flags.end();
}

std::size_t MethodDef::entry_index() const {
  std::string_view block;
  bool in_block = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string_view text = body[i].text;
    if (in_block) {
      if (IsDataBlockEnd(text, block)) in_block = false;
      continue;
    }
    if (IsDataBlockStart(text, &block)) {
      in_block = true;
      continue;
    }
    if (body[i].is_opcode() || body[i].is_label()) return i;
  }
  return body.size();
}

std::vector<const Instruction*> MethodDef::instructions() const {
  std::vector<const Instruction*> out;
  std::string_view block;
  bool in_block = false;
  for (const auto& ins : body) {
    if (in_block) {
      if (IsDataBlockEnd(ins.text, block)) in_block = false;
      continue;
    }
    if (IsDataBlockStart(ins.text, &block)) {
      in_block = true;
      continue;
    }
    if (ins.is_opcode()) out.push_back(&ins);
  }
  return out;
}

// --- ClassDef --------------------------------------------------------------

ClassDef ClassDef::Make(TypeDescriptor descriptor, TypeDescriptor superclass,
                        std::vector<std::string> access_flags) {
  ClassDef c;
  std::string class_line = ".class";
  for (const auto& f : access_flags) class_line += " " + f;
  class_line += " " + descriptor.raw();
  c.items.emplace_back(std::move(class_line));
  c.items.emplace_back(".super " + superclass.raw());
  c.descriptor = std::move(descriptor);
  c.superclass = std::move(superclass);
  c.access_flags = std::move(access_flags);
  c.source_path = DefaultSourcePath(c.descriptor);
  return c;
}

void ClassDef::AddMethod(MethodDef method) {
  items.emplace_back(std::string());
  items.emplace_back(methods.size());
  methods.push_back(std::move(method));
}

const MethodDef* ClassDef::FindMethod(const MethodSig& sig) const {
  for (const auto& m : methods) {
    if (m.sig == sig) return &m;
  }
  return nullptr;
}

MethodDef* ClassDef::FindMethod(const MethodSig& sig) {
  for (auto& m : methods) {
    if (m.sig == sig) return &m;
  }
  return nullptr;
}

std::string ClassDef::fields_raw() const {
  std::string out;
  for (const auto& item : items) {
    const auto* line = std::get_if<std::string>(&item);
    if (line == nullptr) continue;
    std::string_view t = TrimLeft(*line);
    if (StartsWithWord(t, ".class") || StartsWithWord(t, ".super") ||
        StartsWithWord(t, ".implements")) {
      continue;
    }
    out += *line;
    out += '\n';
  }
  return out;
}

std::string NormalizeText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t line_start = 0;
  auto end_line = [&] {
    while (out.size() > line_start &&
           (out.back() == ' ' || out.back() == '\t')) {
      out.pop_back();
    }
    out.push_back('\n');
    line_start = out.size();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_line();
    } else if (c == '\n') {
      end_line();
    } else {
      out.push_back(c);
    }
  }
  while (out.size() > line_start && (out.back() == ' ' || out.back() == '\t')) {
    out.pop_back();
  }
  return out;
}

ClassDef ParseClass(std::string_view text, std::string source_path) {
  const std::string normalized = NormalizeText(text);
  ClassDef c;
  c.source_path = std::move(source_path);
  c.trailing_newline = !normalized.empty() && normalized.back() == '\n';

  std::vector<std::string_view> lines;
  {
    std::string_view rest = normalized;
    while (!rest.empty()) {
      std::size_t nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }

  bool have_class = false;
  bool have_super = false;
  std::optional<MethodDef> open;
  std::size_t open_line = 0;
  auto where = [&](std::size_t i) {
    return (c.source_path.empty() ? std::string("<input>") : c.source_path) +
           ":" + std::to_string(i + 1);
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    std::string_view t = TrimLeft(line);
    if (open) {
      if (StartsWithWord(t, ".end") && Trim(t.substr(4)) == "method") {
        open->end_line = std::string(line);
        c.items.emplace_back(c.methods.size());
        c.methods.push_back(std::move(*open));
        open.reset();
        continue;
      }
      if (StartsWithWord(t, ".method")) {
        throw Error(ErrorKind::kUnbalancedMethod,
                    where(i) + ": .method inside method opened at line " +
                        std::to_string(open_line + 1));
      }
      Instruction ins;
      try {
        ins = Instruction::Parse(line);
      } catch (const Error& e) {
        throw Error(e.kind(), where(i) + ": " + e.what());
      }
      if (StartsWithWord(t, ".registers")) {
        open->registers = ParseRegisterCount(t).value_or(0);
      }
      open->body.push_back(std::move(ins));
      continue;
    }

    if (StartsWithWord(t, ".method")) {
      if (!have_class || !have_super) {
        throw Error(ErrorKind::kMalformedHeader,
                    where(i) + ": method before .class/.super preamble");
      }
      MethodDef m;
      m.header = std::string(line);
      m.sig = ParseMethodHeader(t, c.descriptor, &m.access_flags);
      open = std::move(m);
      open_line = i;
      continue;
    }
    if (StartsWithWord(t, ".end") && Trim(t.substr(4)) == "method") {
      throw Error(ErrorKind::kUnbalancedMethod,
                  where(i) + ": .end method without .method");
    }
    if (StartsWithWord(t, ".class")) {
      if (have_class) {
        throw Error(ErrorKind::kMalformedHeader, where(i) + ": second .class");
      }
      auto words = SplitWords(t);
      if (words.size() < 2) {
        throw Error(ErrorKind::kMalformedHeader, where(i) + ": empty .class");
      }
      c.descriptor = TypeDescriptor::Parse(words.back());
      if (!c.descriptor.is_class()) {
        throw Error(ErrorKind::kBadDescriptor,
                    where(i) + ": .class needs a class descriptor");
      }
      for (std::size_t w = 1; w + 1 < words.size(); ++w) {
        c.access_flags.emplace_back(words[w]);
      }
      have_class = true;
    } else if (StartsWithWord(t, ".super")) {
      auto words = SplitWords(t);
      if (!have_class || have_super || words.size() != 2) {
        throw Error(ErrorKind::kMalformedHeader,
                    where(i) + ": misplaced .super");
      }
      c.superclass = TypeDescriptor::Parse(words[1]);
      have_super = true;
    } else if (StartsWithWord(t, ".implements")) {
      auto words = SplitWords(t);
      if (words.size() != 2) {
        throw Error(ErrorKind::kMalformedHeader,
                    where(i) + ": malformed .implements");
      }
      c.interfaces.push_back(TypeDescriptor::Parse(words[1]));
    }
    c.items.emplace_back(std::string(line));
  }
  if (open) {
    throw Error(ErrorKind::kUnbalancedMethod,
                where(open_line) + ": .method without .end method");
  }
  if (!have_class || !have_super) {
    throw Error(ErrorKind::kMalformedHeader,
                (c.source_path.empty() ? std::string("<input>")
                                       : c.source_path) +
                    ": missing .class/.super preamble");
  }
  return c;
}

std::string EmitClass(const ClassDef& c) {
  std::string out;
  bool first = true;
  auto line = [&](std::string_view s) {
    if (!first) out.push_back('\n');
    out.append(s);
    first = false;
  };
  for (const auto& item : c.items) {
    if (const auto* raw = std::get_if<std::string>(&item)) {
      line(*raw);
      continue;
    }
    const MethodDef& m = c.methods.at(std::get<std::size_t>(item));
    line(m.header);
    for (const auto& ins : m.body) line(ins.Emit());
    line(m.end_line);
  }
  if (c.trailing_newline && !first) out.push_back('\n');
  return out;
}

std::string DefaultSourcePath(const TypeDescriptor& descriptor) {
  return "smali/" + descriptor.binary_name() + ".smali";
}

}  // namespace triggerforge
