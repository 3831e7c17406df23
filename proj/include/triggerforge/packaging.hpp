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

#ifndef TRIGGERFORGE_PACKAGING_HPP_
#define TRIGGERFORGE_PACKAGING_HPP_

// Collateral effects of an infection: manifest permissions, native library
// stubs, and an integrity record.
//
// Outputs are text bundles, not installable APKs. Alignment and signing are
// replaced by IntegrityRecord, a pair of canonical SHA-256 digests.

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "triggerforge/ir.hpp"
#include "triggerforge/payload.hpp"

namespace triggerforge {

/// Inserts `<uses-permission android:name="p"/>` for every p not yet
/// declared, in order, just before `<application>` (or before
/// `</manifest>` when there is no application element). Everything else is
/// preserved byte for byte; patching twice is a no-op.
Manifest PatchManifest(const Manifest& m, std::span<const std::string> perms);

/// `TRIGGERZOO-NATIVE-STUB v1\n` followed by the guarded-code type name.
/// Deliberately not an ELF object.
std::string NativeStubContent(GuardedCodeType g);

/// Adds lib/<abi>/<filename> stubs. An existing file with the same bytes is
/// accepted; different bytes throw Error{kStubCollision}.
AppBundle PlaceNativeStubs(const AppBundle& bundle,
                           const std::set<NativeRequirement>& reqs,
                           GuardedCodeType g);

struct IntegrityRecord {
  std::string sha256_original;
  std::string sha256_infected;
  std::string finalized_at;  // ISO-8601 UTC; not covered by determinism
};

std::string Sha256Hex(std::string_view bytes);

/// SHA-256 over files sorted by `/`-separated relative path, each encoded
/// as: path bytes, one 0x00 byte, the byte length as 8-byte little-endian,
/// then the content.
std::string CanonicalDigest(const std::map<std::string, std::string>& files);

std::string DigestBundle(const AppBundle& bundle);
/// Same serialization over the regular files of an on-disk tree.
std::string DigestDirectory(const std::filesystem::path& root);

IntegrityRecord Finalize(const AppBundle& before, const AppBundle& after);

}  // namespace triggerforge

#endif  // TRIGGERFORGE_PACKAGING_HPP_
