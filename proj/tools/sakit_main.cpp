#include <iostream>

#include "sakit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sakit::cli_run(args, std::cout, std::cerr);
}
