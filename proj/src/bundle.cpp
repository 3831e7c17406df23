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
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "triggerforge/error.hpp"
#include "triggerforge/ir.hpp"
#include "xml_scan.hpp"

namespace triggerforge {
namespace fs = std::filesystem;
using internal::ScanStartTags;
using internal::Tag;
namespace {

std::string ResolveComponentName(const std::string& package,
                                 const std::string& name) {
  if (name.starts_with('.')) return package + name;
  if (name.find('.') == std::string::npos) return package + "." + name;
  return name;
}

std::string RelativeGeneric(const fs::path& p, const fs::path& root) {
  return p.lexically_relative(root).generic_string();
}

}  // namespace

std::string_view ComponentKindName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kActivity: return "Activity";
    case ComponentKind::kService: return "Service";
    case ComponentKind::kReceiver: return "Receiver";
    case ComponentKind::kProvider: return "Provider";
  }
  return "?";
}

Manifest Manifest::Parse(std::string text) {
  Manifest m;
  bool seen_manifest = false;
  for (const Tag& tag : ScanStartTags(text)) {
    if (tag.name == "manifest") {
      const std::string* package = tag.Attribute("package");
      if (package == nullptr || package->empty()) {
        throw Error(ErrorKind::kMalformedManifest,
                    "<manifest> has no package attribute");
      }
      m.package = *package;
      seen_manifest = true;
      continue;
    }
    const std::string* name = tag.Attribute("android:name");
    if (tag.name == "uses-permission" && name != nullptr) {
      if (!m.HasPermission(*name)) m.permissions.push_back(*name);
    } else if (tag.name == "uses-sdk") {
      auto level = [&](const char* key) -> std::optional<int> {
        const std::string* v = tag.Attribute(key);
        if (v == nullptr) return std::nullopt;
        try {
          return std::stoi(*v);
        } catch (const std::exception&) {
          throw Error(ErrorKind::kMalformedManifest,
                      std::string("non-numeric ") + key + " '" + *v + "'");
        }
      };
      m.min_sdk = level("android:minSdkVersion");
      m.target_sdk = level("android:targetSdkVersion");
    } else if (name != nullptr) {
      std::optional<ComponentKind> kind;
      if (tag.name == "activity") kind = ComponentKind::kActivity;
      if (tag.name == "service") kind = ComponentKind::kService;
      if (tag.name == "receiver") kind = ComponentKind::kReceiver;
      if (tag.name == "provider") kind = ComponentKind::kProvider;
      if (kind) m.components.push_back({*kind, *name});
    }
  }
  if (!seen_manifest) {
    throw Error(ErrorKind::kMalformedManifest, "no <manifest> element");
  }
  for (auto& c : m.components) {
    c.class_name = ResolveComponentName(m.package, c.class_name);
  }
  m.raw_text = std::move(text);
  return m;
}

bool Manifest::HasPermission(std::string_view name) const {
  return std::find(permissions.begin(), permissions.end(), name) !=
         permissions.end();
}

const Component* Manifest::FindComponent(std::string_view dotted_class) const {
  for (const auto& c : components) {
    if (c.class_name == dotted_class) return &c;
  }
  return nullptr;
}

const ClassDef* AppBundle::FindClass(const TypeDescriptor& d) const {
  auto it = classes.find(d);
  return it == classes.end() ? nullptr : &it->second;
}

const MethodDef* AppBundle::FindMethod(const MethodSig& sig) const {
  const ClassDef* c = FindClass(sig.owner);
  return c == nullptr ? nullptr : c->FindMethod(sig);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIoFailure, "cannot read " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFile(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw Error(ErrorKind::kIoFailure,
                "cannot create " + path.parent_path().string() + ": " +
                    ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
}

AppBundle ParseApp(const fs::path& root) {
  const fs::path manifest_path = root / "AndroidManifest.xml";
  if (!fs::is_regular_file(manifest_path)) {
    throw Error(ErrorKind::kMissingManifest,
                "no AndroidManifest.xml under " + root.string());
  }
  AppBundle bundle;
  bundle.root = root;
  bundle.manifest = Manifest::Parse(ReadFile(manifest_path));
  bundle.package_name = bundle.manifest.package;

  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file()) files.push_back(it->path());
  }
  if (ec) throw Error(ErrorKind::kIoFailure, root.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    std::string rel = RelativeGeneric(file, root);
    if (rel == "AndroidManifest.xml") continue;
    if (rel.starts_with("smali/") && rel.ends_with(".smali")) {
      // ParseClass errors already carry `rel` in their message.
      ClassDef c = ParseClass(ReadFile(file), rel);
      TypeDescriptor d = c.descriptor;
      if (bundle.classes.contains(d)) {
        throw Error(ErrorKind::kDuplicateClass,
                    d.raw() + " declared by " +
                        bundle.classes.at(d).source_path + " and " + rel);
      }
      bundle.classes.emplace(std::move(d), std::move(c));
      continue;
    }
    fs::path relp(rel);
    auto parts = std::distance(relp.begin(), relp.end());
    if (rel.starts_with("lib/") && parts == 3) {
      auto it = relp.begin();
      std::string abi = (++it)->string();
      std::string name = (++it)->string();
      bundle.native_libs.emplace(NativeLibKey{abi, name}, ReadFile(file));
      continue;
    }
    bundle.other_files.emplace(rel, ReadFile(file));
  }
  return bundle;
}

std::map<std::string, std::string> BundleFiles(const AppBundle& bundle) {
  std::map<std::string, std::string> files = bundle.other_files;
  files["AndroidManifest.xml"] = bundle.manifest.raw_text;
  for (const auto& [d, c] : bundle.classes) {
    std::string path =
        c.source_path.empty() ? DefaultSourcePath(d) : c.source_path;
    files[path] = EmitClass(c);
  }
  for (const auto& [key, bytes] : bundle.native_libs) {
    files["lib/" + key.first + "/" + key.second] = bytes;
  }
  return files;
}

void EmitApp(const AppBundle& bundle, const fs::path& out) {
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec) || !fs::is_empty(out, ec)) {
      throw Error(ErrorKind::kIoFailure,
                  out.string() + " exists and is not an empty directory");
    }
  }
  fs::create_directories(out, ec);
  if (ec) {
    throw Error(ErrorKind::kIoFailure,
                "cannot create " + out.string() + ": " + ec.message());
  }
  for (const auto& [rel, bytes] : BundleFiles(bundle)) {
    WriteFile(out / fs::path(rel), bytes);
  }
}

}  // namespace triggerforge
