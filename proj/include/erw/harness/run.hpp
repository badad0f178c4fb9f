#pragma once

#include "erw/harness/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace erw::harness {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitVerifyFailed = 2 };

/// walk, hit, regen, rate, tails, oracle, verify.
const std::vector<std::string>& subcommands();

/// Runs one subcommand. Parameters come from the config section of the same
/// name; outputs go under settings.out. Validation errors are reported on `err`
/// and turned into kExitInvalid.
int run(const std::string& subcommand, const Config& config, const RunSettings& settings, std::ostream& out,
        std::ostream& err);

}  // namespace erw::harness
