// Copyright 2026 The fracdyn Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "config.hpp"

namespace fracdyn::cli {

struct RunContext {
  json config;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string digest;  // sha256 of the canonical config
};

/// Runs the command named in the config's `command` field. Returns 0, or 4
/// if a fit did not converge (artifacts are still written).
int run_command(const std::string& command, const RunContext& ctx);

}  // namespace fracdyn::cli
