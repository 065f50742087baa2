#ifndef SEQMD_TOOLS_MANIFEST_H_
#define SEQMD_TOOLS_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqmd/error.h"
#include "seqmd/json_util.h"

namespace seqmd::cli {

// Raised for invocation problems that map to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

const char* ToolVersion();

// Flags shared by every subcommand.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::filesystem::path out = "seqmd_out";
  bool force = false;
  std::vector<std::string> argv;
};

// Config file contents for `command`: either a plain config object or a
// manifest written by an earlier run of the same command.
Json LoadConfigFile(const std::string& path, const std::string& command);

// `defaults` overlaid with the --config file (objects merge, other values
// replace).
Json ResolveConfig(const GlobalOptions& opts, const std::string& command, Json defaults);

// Run record written to <out>/manifest.json before any work starts and
// updated when the command ends.
class Manifest {
 public:
  Manifest(const GlobalOptions& opts, std::string command, Json config,
           std::vector<std::string> artifacts);

  // Throws UsageError if an artifact exists and --force was not given.
  void CheckOutputs() const;
  std::filesystem::path Path(const std::string& artifact) const;

  // Writes the manifest, runs `work`, then records the outcome.
  void Run(const std::function<void()>& work);

 private:
  void Write() const;

  const GlobalOptions& opts_;
  Json doc_;
  std::vector<std::string> artifacts_;
};

}  // namespace seqmd::cli

#endif  // SEQMD_TOOLS_MANIFEST_H_
