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

#include "fam/cli/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace fam::cli {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("FAM_LOG");
    const std::string value = env ? env : "";
    if (value == "error") return LogLevel::Error;
    if (value == "info") return LogLevel::Info;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log(LogLevel level, std::string_view message) {
  if (level > log_level()) return;
  static std::mutex mutex;
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  std::lock_guard lock(mutex);
  std::cerr << "[fam " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace fam::cli
