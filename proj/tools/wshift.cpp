#include <iostream>
#include <string>
#include <vector>

#include "wshift/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wshift::cli::run(args, std::cout, std::cerr);
}
