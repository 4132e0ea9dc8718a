#include <iostream>
#include <string>
#include <vector>

#include "cdcform/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cdcform::run_cli(args, std::cin, std::cout, std::cerr);
}
