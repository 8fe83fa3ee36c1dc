#pragma once

#include <ostream>
#include <span>
#include <string>

namespace pdw::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitConflict = 2,
  kExitIo = 3,
};

struct Terminal {
  std::ostream& out;
  std::ostream& err;
  /// ANSI styling for diagnostics on `err`.
  bool color = false;
};

/// Entry point shared by the `pdw` binary and the tests. `args` excludes argv[0].
int run(std::span<const std::string> args, const Terminal& term);

}  // namespace pdw::cli
