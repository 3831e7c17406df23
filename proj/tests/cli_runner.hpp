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

#ifndef TRIGGERFORGE_TESTS_CLI_RUNNER_HPP_
#define TRIGGERFORGE_TESTS_CLI_RUNNER_HPP_

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace testutil {

struct CliRun {
  int code = -1;
  std::string out;
};

/// Runs the built CLI through the shell. `env` is prefixed verbatim.
inline CliRun RunCli(const std::string& args, bool with_stderr = false,
                     const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + TF_CLI + " " + args +
                    (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  CliRun r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string Quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace testutil

#endif  // TRIGGERFORGE_TESTS_CLI_RUNNER_HPP_
