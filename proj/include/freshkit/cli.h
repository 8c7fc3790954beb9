/*
 * Copyright 2026 The freshkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRESHKIT_CLI_H_
#define FRESHKIT_CLI_H_

#include <ostream>

namespace freshkit {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMalformedInput = 2;
inline constexpr int kExitNumeric = 3;

// Runs the `freshkit` command line. Reports go to `out` unless --out names
// a file; diagnostics go to `err`. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freshkit

#endif  // FRESHKIT_CLI_H_
