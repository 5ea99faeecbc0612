// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The otfsftn authors
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

#ifndef OTFSFTN_TOOLS_CLI_HPP
#define OTFSFTN_TOOLS_CLI_HPP

#include <ostream>

namespace otfsftn::cli
{
    enum ExitCode
    {
        ok = 0,
        failure = 1,
        usage = 2,
        config = 3,
        capacity = 4
    };

    // Runs one subcommand. Results go to `out` (or the configured output file); failures print
    // one `error: {json}` line on `err`.
    int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}

#endif
