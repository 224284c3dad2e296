/*
   Copyright 2026 The FAM Authors
   SPDX-License-Identifier: Apache-2.0

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <string_view>

namespace fam::cli {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level from the FAM_LOG environment variable ("error", "warn", "info",
/// "debug"); defaults to warn.
LogLevel log_level();

void log(LogLevel level, std::string_view message);

}  // namespace fam::cli
