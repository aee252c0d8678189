//
// Copyright 2026 The FedMon Authors
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
//

#ifndef FEDMON_CLI_H_
#define FEDMON_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedmon/config.h"

namespace fedmon {

inline constexpr char kOutDirEnv[] = "FEDMON_OUT_DIR";
inline constexpr char kDefaultOutDir[] = "fedmon_out";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses "client=K,round=N,mode=signflip,factor=F"; omitted keys keep their
// defaults.
absl::StatusOr<PoisonSpec> ParsePoisonFlag(absl::string_view text);

// Entry point for the fedmon binary. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace fedmon

#endif  // FEDMON_CLI_H_
