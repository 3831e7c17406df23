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

#include <regex>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "test_util.hpp"
#include "triggerforge/error.hpp"
#include "triggerforge/packaging.hpp"

using namespace triggerforge;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kHttpLocation = {
    "android.permission.ACCESS_COARSE_LOCATION",
    "android.permission.ACCESS_FINE_LOCATION", "android.permission.INTERNET"};

constexpr const char* kManifest =
    "<?xml version=\"1.0\"?>\n"
    "<manifest xmlns:android=\"http://schemas.android.com/apk/res/android\"\n"
    "    package=\"com.p\">\n"
    "\n"
    "    <application android:label=\"x\">\n"
    "        <activity android:name=\".Main\" />\n"
    "    </application>\n"
    "</manifest>\n";

std::size_t Count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("patch manifest inserts before application, in order") {
  Manifest m = Manifest::Parse(kManifest);
  Manifest out = PatchManifest(m, kHttpLocation);
  CHECK(out.permissions == kHttpLocation);
  CHECK(out.raw_text ==
        "<?xml version=\"1.0\"?>\n"
        "<manifest xmlns:android=\"http://schemas.android.com/apk/res/android\"\n"
        "    package=\"com.p\">\n"
        "\n"
        "    <uses-permission android:name=\"android.permission.ACCESS_COARSE_LOCATION\"/>\n"
        "    <uses-permission android:name=\"android.permission.ACCESS_FINE_LOCATION\"/>\n"
        "    <uses-permission android:name=\"android.permission.INTERNET\"/>\n"
        "    <application android:label=\"x\">\n"
        "        <activity android:name=\".Main\" />\n"
        "    </application>\n"
        "</manifest>\n");
  CHECK(out.components == m.components);
  CHECK(out.package == m.package);
}

TEST_CASE("patch manifest is idempotent and never duplicates") {
  Manifest m = Manifest::Parse(kManifest);
  Manifest once = PatchManifest(m, kHttpLocation);
  CHECK(PatchManifest(once, kHttpLocation).raw_text == once.raw_text);
  CHECK(PatchManifest(m, {}).raw_text == m.raw_text);
  std::vector<std::string> dup = {"android.permission.INTERNET", "android.permission.INTERNET"};
  Manifest d = PatchManifest(m, dup);
  CHECK(Count(d.raw_text, "android.permission.INTERNET") == 1);
  Manifest partial = PatchManifest(m, std::vector<std::string>{"android.permission.INTERNET"});
  Manifest rest = PatchManifest(partial, kHttpLocation);
  CHECK(Count(rest.raw_text, "uses-permission") == 3);
}

TEST_CASE("patch manifest fallbacks and errors") {
  Manifest no_app = Manifest::Parse("<manifest package=\"com.p\">\n</manifest>\n");
  Manifest out = PatchManifest(no_app, std::vector<std::string>{"android.permission.INTERNET"});
  CHECK(out.raw_text ==
        "<manifest package=\"com.p\">\n"
        "    <uses-permission android:name=\"android.permission.INTERNET\"/>\n"
        "</manifest>\n");
  Manifest inline_app = Manifest::Parse("<manifest package=\"com.p\"><application/></manifest>");
  CHECK(PatchManifest(inline_app, std::vector<std::string>{"android.permission.INTERNET"})
            .HasPermission("android.permission.INTERNET"));
  Manifest broken = Manifest::Parse("<manifest package=\"com.p\">");
  try {
    PatchManifest(broken, std::vector<std::string>{"android.permission.INTERNET"});
    FAIL("expected MalformedManifest");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMalformedManifest);
  }
}

TEST_CASE("native stubs") {
  AppBundle b = ParseApp(testutil::Fixture("app08"));
  std::set<NativeRequirement> reqs = {{"armeabi-v7a", "libtriggerzoo.so"},
                                      {"arm64-v8a", "libtriggerzoo.so"}};
  AppBundle out = PlaceNativeStubs(b, reqs, GuardedCodeType::kNativeLogString);
  CHECK(out.native_libs.size() == b.native_libs.size() + 2);
  CHECK(out.native_libs.at({"arm64-v8a", "libtriggerzoo.so"}) ==
        "TRIGGERZOO-NATIVE-STUB v1\nnative_log_string");
  CHECK(out.native_libs.at({"armeabi-v7a", "libexisting.so"}) ==
        b.native_libs.at({"armeabi-v7a", "libexisting.so"}));
  CHECK(BundleFiles(PlaceNativeStubs(b, {}, GuardedCodeType::kNativeLogString)) == BundleFiles(b));
  // Same bytes already there: accepted.
  CHECK(BundleFiles(PlaceNativeStubs(out, reqs, GuardedCodeType::kNativeLogString)) ==
        BundleFiles(out));
  try {
    PlaceNativeStubs(out, reqs, GuardedCodeType::kNativeLogModel);
    FAIL("expected StubCollision");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kStubCollision);
  }
}

TEST_CASE("sha-256 and canonical digest") {
  CHECK(Sha256Hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256Hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // Value computed independently with Python's hashlib over the documented
  // (path, 0x00, u64le length, bytes) serialization.
  std::map<std::string, std::string> files = {
      {"b/c.smali", ""}, {"AndroidManifest.xml", "<manifest/>"}, {"a.txt", "hi"}};
  CHECK(CanonicalDigest(files) ==
        "d691b1c4cff93fcf81d5ae6bfd6bd93e6d6f8fc1e1174a7ca7be0ad19b879f5e");
}

TEST_CASE("digests agree between memory and disk and are order independent") {
  for (const auto& dir : oracle::AppDirs(testutil::Fixtures())) {
    CAPTURE(dir.string());
    AppBundle b = ParseApp(dir);
    std::string d = DigestBundle(b);
    CHECK(std::regex_match(d, std::regex("[0-9a-f]{64}")));
    CHECK(DigestDirectory(dir) == d);
    CHECK(DigestBundle(ParseApp(dir)) == d);
  }
}

TEST_CASE("finalize") {
  AppBundle b = ParseApp(testutil::Fixture("app01"));
  IntegrityRecord same = Finalize(b, b);
  CHECK(same.sha256_original == same.sha256_infected);
  CHECK(std::regex_match(same.finalized_at,
                         std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
  AppBundle changed = PlaceNativeStubs(b, {{"arm64-v8a", "libtriggerzoo.so"}},
                                       GuardedCodeType::kNativeLogString);
  IntegrityRecord diff = Finalize(b, changed);
  CHECK(diff.sha256_original == same.sha256_original);
  CHECK(diff.sha256_infected != diff.sha256_original);
}
