#include <iostream>
#include <string>
#include <vector>

#include "seqspace/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return seqspace::cli::run(args, std::cout, std::cerr);
}
