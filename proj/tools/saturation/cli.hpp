#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace saturation::cli {

// Environment consulted for defaults (flags take precedence).
//   SATURATION_ALPHA     default --alpha
//   SATURATION_OUT_DIR   directory that relative --out paths resolve against
//   SATURATION_LISTEN    default serve --listen (host:port)
//   SATURATION_DATA_DIR  default serve --data-dir
using Environment = std::map<std::string, std::string>;

Environment process_environment();

/// Runs one subcommand. `args` excludes the program name. Data goes to
/// `out` (or the --out file), diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace saturation::cli
