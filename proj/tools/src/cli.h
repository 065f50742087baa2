#ifndef SEQMD_TOOLS_CLI_H_
#define SEQMD_TOOLS_CLI_H_

#include <iosfwd>

namespace seqmd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `seqmd` tool. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqmd::cli

#endif  // SEQMD_TOOLS_CLI_H_
