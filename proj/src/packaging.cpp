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

#include "triggerforge/packaging.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <ctime>
#include <memory>
#include <system_error>

#include "triggerforge/error.hpp"
#include "xml_scan.hpp"

namespace triggerforge {
namespace fs = std::filesystem;

Manifest PatchManifest(const Manifest& m, std::span<const std::string> perms) {
  std::vector<std::string> missing;
  for (const auto& p : perms) {
    if (!m.HasPermission(p) &&
        std::find(missing.begin(), missing.end(), p) == missing.end()) {
      missing.push_back(p);
    }
  }
  if (missing.empty()) return m;

  const std::string& text = m.raw_text;
  std::optional<std::size_t> application;
  for (const auto& tag : internal::ScanStartTags(text)) {
    if (tag.name == "application") {
      application = tag.begin;
      break;
    }
  }
  std::size_t anchor;
  std::string extra_indent;
  if (application) {
    anchor = *application;
  } else {
    anchor = text.rfind("</manifest>");
    if (anchor == std::string::npos) {
      throw Error(ErrorKind::kMalformedManifest,
                  "neither <application> nor </manifest> found");
    }
    extra_indent = "    ";
  }

  std::size_t line_start = text.rfind('\n', anchor);
  line_start = line_start == std::string::npos ? 0 : line_start + 1;
  std::string_view prefix(text.data() + line_start, anchor - line_start);
  bool own_line = std::all_of(prefix.begin(), prefix.end(),
                              [](char c) { return c == ' ' || c == '\t'; });

  std::string insert;
  if (own_line) {
    for (const auto& p : missing) {
      insert += std::string(prefix) + extra_indent +
                "<uses-permission android:name=\"" + p + "\"/>\n";
    }
  } else {
    line_start = anchor;
    for (const auto& p : missing) {
      insert += "<uses-permission android:name=\"" + p + "\"/>\n";
    }
  }
  std::string patched = text;
  patched.insert(line_start, insert);
  return Manifest::Parse(std::move(patched));
}

std::string NativeStubContent(GuardedCodeType g) {
  return "TRIGGERZOO-NATIVE-STUB v1\n" + std::string(GuardedName(g));
}

AppBundle PlaceNativeStubs(const AppBundle& bundle,
                           const std::set<NativeRequirement>& reqs,
                           GuardedCodeType g) {
  AppBundle out = bundle;
  const std::string content = NativeStubContent(g);
  for (const auto& req : reqs) {
    NativeLibKey key{req.abi, req.filename};
    auto [it, inserted] = out.native_libs.emplace(key, content);
    if (!inserted && it->second != content) {
      throw Error(ErrorKind::kStubCollision,
                  "lib/" + req.abi + "/" + req.filename +
                      " already exists with different content");
    }
  }
  return out;
}

std::string Sha256Hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error(ErrorKind::kIoFailure, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string CanonicalDigest(const std::map<std::string, std::string>& files) {
  std::string stream;
  for (const auto& [path, bytes] : files) {
    stream += path;
    stream.push_back('\0');
    std::uint64_t n = bytes.size();
    for (int i = 0; i < 8; ++i) {
      stream.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
    }
    stream += bytes;
  }
  return Sha256Hex(stream);
}

std::string DigestBundle(const AppBundle& bundle) {
  return CanonicalDigest(BundleFiles(bundle));
}

std::string DigestDirectory(const fs::path& root) {
  std::map<std::string, std::string> files;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorKind::kIoFailure, root.string() + " is not a directory");
  }
  for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    files.emplace(it->path().lexically_relative(root).generic_string(),
                  ReadFile(it->path()));
  }
  if (ec) throw Error(ErrorKind::kIoFailure, root.string() + ": " + ec.message());
  return CanonicalDigest(files);
}

IntegrityRecord Finalize(const AppBundle& before, const AppBundle& after) {
  IntegrityRecord r;
  r.sha256_original = DigestBundle(before);
  r.sha256_infected = DigestBundle(after);
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  r.finalized_at = buf;
  return r;
}

}  // namespace triggerforge
