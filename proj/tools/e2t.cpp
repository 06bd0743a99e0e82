#include <iostream>
#include <string>
#include <vector>

#include "e2t/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return e2t::cli::run(args, std::cout, std::cerr);
}
