// cli.hpp: command-line entry point.
//
// Exit codes: 0 success, 1 internal fault, 2 precondition violation (error
// JSON on stdout), 64 unknown subcommand, 65 malformed JSON input.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thermo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitUnknownCommand = 64;
inline constexpr int kExitMalformedJson = 65;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace thermo::cli
