#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nhq::cli {

/// Process exit codes.
enum ExitCode : int {
    Ok = 0,
    Usage = 1,
    Io = 2,
    Parse = 3,
    FitFailure = 4,
    Model = 5,
};

/// Environment variable naming the directory relative --out paths resolve against.
inline constexpr const char* output_dir_env = "NHQ_OUTPUT_DIR";

/// Runs the command line tool. `args` excludes the program name. Data goes to
/// `out`, diagnostics and the JSON summary/error records to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nhq::cli
