#include <iostream>
#include <string>
#include <vector>

#include "statedeg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return statedeg::run_cli(args, std::cout, std::cerr);
}
