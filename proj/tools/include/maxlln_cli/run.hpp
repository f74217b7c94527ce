#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace maxlln::cli {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, data_error = 3, numerical_error = 4, resource_error = 5 };

/// Validates and executes one experiment config; artifacts go to
/// config.output.dir and manifest.json is written last. Errors are reported
/// on `err` and mapped to exit codes.
int run(const nlohmann::json& config, std::ostream& log, std::ostream& err);

/// Command line front end: subcommands build a config and call run().
int main_entry(int argc, char** argv);

}  // namespace maxlln::cli
