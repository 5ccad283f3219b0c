#ifndef PROMPTAUG_CLI_H_
#define PROMPTAUG_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace promptaug::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadInput = 2,   // usage error or unreadable input
  kExitBadBox = 3,
  kExitBackend = 4,    // backend failure (or flagged samples in eval)
  kExitManifest = 5,   // volume manifest inconsistent with its files
};

// Entry point behind the `promptaug` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace promptaug::cli

#endif  // PROMPTAUG_CLI_H_
