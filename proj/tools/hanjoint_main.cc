// hanjoint command-line entry point.

#include <iostream>
#include <string>
#include <vector>

#include "hanjoint/cli_commands.h"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hanjoint::cli::Dispatch(args, std::cout, std::cerr);
}
