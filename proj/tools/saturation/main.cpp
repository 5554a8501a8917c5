#include <iostream>

#include "saturation/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return saturation::cli::run(args, std::cout, std::cerr, saturation::cli::process_environment());
}
