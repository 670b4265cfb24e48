#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rispaces/config.hpp"

namespace rispaces {

// Exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNumeric = 1,  // NoConvergence, Divergent, ...
  kExitConfig = 2,   // bad flags, specs, or violated hypotheses
  kExitReport = 3    // experiment ran but its report failed
};

struct RunConfig {
  std::string command;
  std::vector<std::string> fn, space, couple;  // name or JSON, then key=value tokens
  std::string theorem;
  std::vector<std::string> params;  // key=value tokens after the command
  std::string out;                  // empty: stdout
  std::optional<std::uint64_t> seed;
  Resolution res;
  double ceiling = Defaults::ceiling;
  int threads = 0;
};

// Turns "name key=value ..." tokens (or a single JSON object or file path) into a
// JSON spec string with `name_key` holding the name.
std::string tokens_to_json(const std::vector<std::string>& tokens, const std::string& name_key,
                           const std::string& bare_key = "");

// Seed precedence: flag, then RISPACES_SEED, then the built-in default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rispaces
