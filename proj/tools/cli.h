// Copyright 2026 The whatif Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. State lives in a workspace directory holding the
// cube manifest, a copy of the CSV and the scenario store document.

#ifndef WHATIF_TOOLS_CLI_H_
#define WHATIF_TOOLS_CLI_H_

#include <ostream>

namespace whatif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace whatif::cli

#endif  // WHATIF_TOOLS_CLI_H_
