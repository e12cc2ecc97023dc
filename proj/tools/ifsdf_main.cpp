#include <iostream>
#include <string>
#include <vector>

#include "ifsdf/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return ifsdf::cli_main(args, std::cout, std::cerr);
}
