#include <iostream>
#include <string>
#include <vector>

#include "mtc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mtc::cli::run(args, std::cout, std::cerr);
}
