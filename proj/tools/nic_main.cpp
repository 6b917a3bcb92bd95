#include <iostream>

#include "nic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nic::cli::run(args, std::cout, std::cerr);
}
