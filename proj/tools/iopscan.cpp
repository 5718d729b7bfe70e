#include <iostream>

#include "iopscan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return iopscan::run_cli(args, std::cout, std::cerr);
}
