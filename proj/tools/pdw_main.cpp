#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pdw/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const bool color = std::getenv("PDW_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) == 1;
  return pdw::cli::run(args, {std::cout, std::cerr, color});
}
