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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fracdyn/errors.hpp"
#include "fracdyn/io.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kAccuracy = 3, kNoConvergence = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace fracdyn;
  using cli::ConfigError;

  CLI::App app{"fracdyn: fractional open-system dynamics"};
  std::string command, config_path, out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  app.add_option("command", command, "exact | markov | fracfit | subordinate | solve")->required();
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out, "output CSV path")->required();
  app.add_option("--seed", seed, "Monte-Carlo seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) throw ConfigError(config_path, "cannot read config");
    std::stringstream ss;
    ss << f.rdbuf();
    cli::RunContext ctx;
    try {
      ctx.config = cli::json::parse(ss.str());
    } catch (const cli::json::parse_error& e) {
      throw ConfigError(config_path, e.what());
    }
    const cli::Node root(ctx.config, "$");
    if (!ctx.config.is_object()) throw ConfigError("$", "expected an object");
    const std::string declared = root.string("command");
    if (declared != command) throw ConfigError("$.command", "config is for \"" + declared + "\", not \"" + command + "\"");
    if (root.has("seed")) {
      const auto& s = root.at("seed").raw();
      if (!s.is_number_unsigned()) throw ConfigError("$.seed", "expected a nonnegative integer");
      ctx.seed = s.get<std::uint64_t>();
    }
    if (seed) ctx.seed = *seed;
    ctx.threads = threads;
    ctx.digest = io::sha256_hex(ctx.config.dump());
    ctx.out = out;
    if (const char* dir = std::getenv("FRACDYN_OUTPUT_DIR"); dir && *dir)
      ctx.out = std::filesystem::path(dir) / ctx.out.filename();
    return cli::run_command(command, ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy failure: " << e.what() << '\n';
    return kAccuracy;
  } catch (const InstabilityError& e) {
    std::cerr << "accuracy failure: " << e.what() << '\n';
    return kAccuracy;
  } catch (const EstimationError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
