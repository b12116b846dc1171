#include <iostream>
#include <string>
#include <vector>

#include "rot/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rot::cli::run_cli(args, std::cout, std::cerr);
}
