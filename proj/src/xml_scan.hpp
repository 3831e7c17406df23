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

#ifndef TRIGGERFORGE_SRC_XML_SCAN_HPP_
#define TRIGGERFORGE_SRC_XML_SCAN_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "triggerforge/error.hpp"

namespace triggerforge::internal {

struct Tag {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::size_t begin = 0;  // offset of '<'
  std::size_t end = 0;    // offset one past '>'

  const std::string* Attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

inline bool IsXmlSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Minimal start-tag scanner: comments, processing instructions, declarations
// and end tags are skipped.
inline std::vector<Tag> ScanStartTags(std::string_view xml) {
  std::vector<Tag> tags;
  std::size_t pos = 0;
  auto malformed = [](const char* why) {
    return Error(ErrorKind::kMalformedManifest, why);
  };
  while ((pos = xml.find('<', pos)) != std::string_view::npos) {
    if (xml.substr(pos).starts_with("<!--")) {
      std::size_t end = xml.find("-->", pos + 4);
      if (end == std::string_view::npos) throw malformed("unterminated comment");
      pos = end + 3;
      continue;
    }
    if (xml.substr(pos).starts_with("<?") ||
        xml.substr(pos).starts_with("<!") ||
        xml.substr(pos).starts_with("</")) {
      std::size_t end = xml.find('>', pos);
      if (end == std::string_view::npos) throw malformed("unterminated tag");
      pos = end + 1;
      continue;
    }
    Tag tag;
    tag.begin = pos;
    std::size_t i = pos + 1;
    while (i < xml.size() && !IsXmlSpace(xml[i]) && xml[i] != '>' &&
           xml[i] != '/') {
      tag.name.push_back(xml[i++]);
    }
    for (;;) {
      while (i < xml.size() && IsXmlSpace(xml[i])) ++i;
      if (i >= xml.size()) throw malformed("unterminated tag");
      if (xml[i] == '>') break;
      if (xml[i] == '/') {
        ++i;
        continue;
      }
      std::string key;
      while (i < xml.size() && xml[i] != '=' && !IsXmlSpace(xml[i]) &&
             xml[i] != '>' && xml[i] != '/') {
        key.push_back(xml[i++]);
      }
      while (i < xml.size() && IsXmlSpace(xml[i])) ++i;
      if (i >= xml.size() || xml[i] != '=') throw malformed("attribute value");
      ++i;
      while (i < xml.size() && IsXmlSpace(xml[i])) ++i;
      if (i >= xml.size() || (xml[i] != '"' && xml[i] != '\'')) {
        throw malformed("unquoted attribute");
      }
      char quote = xml[i++];
      std::size_t end = xml.find(quote, i);
      if (end == std::string_view::npos) throw malformed("unterminated value");
      tag.attributes.emplace_back(std::move(key),
                                  std::string(xml.substr(i, end - i)));
      i = end + 1;
    }
    tag.end = i + 1;
    tags.push_back(std::move(tag));
    pos = i + 1;
  }
  return tags;
}

}  // namespace triggerforge::internal

#endif  // TRIGGERFORGE_SRC_XML_SCAN_HPP_
