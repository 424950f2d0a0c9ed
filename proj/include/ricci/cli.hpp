#pragma once

namespace ricci {

inline constexpr const char* kVersion = "1.0.0";

// Full command-line entry point (argv[0] is the program name).  Returns the
// process exit status; all diagnostics go to stderr, data to stdout.
int cli_main(int argc, const char* const* argv);

}  // namespace ricci
