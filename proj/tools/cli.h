// tools/cli.h

// Copyright 2026  The prosokit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSOKIT_TOOLS_CLI_H_
#define PROSOKIT_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace prosokit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFatal = 1,
  kExitPartial = 2,
  kExitUsage = 64,
};

enum class LogLevel { kError, kWarn, kInfo, kDebug };

struct GlobalOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  LogLevel log_level = LogLevel::kInfo;
};

/// Parses and runs one invocation. `args` excludes the program name. JSON
/// results go to `out`, logs to `err`.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace prosokit::cli

#endif  // PROSOKIT_TOOLS_CLI_H_
