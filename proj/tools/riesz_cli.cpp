#include <iostream>

#include "riesz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return riesz::cli_main(args, std::cout, std::cerr);
}
