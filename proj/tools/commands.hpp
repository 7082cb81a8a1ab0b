#pragma once

namespace mattekit::cli {

/// Parses argv and dispatches to a subcommand. JSON results go to stdout,
/// logs and errors to stderr. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace mattekit::cli
