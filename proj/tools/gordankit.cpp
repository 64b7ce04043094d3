#include <iostream>

#include "gordankit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gordankit::cli::run(args, std::cout, std::cerr, gordankit::cli::process_environment());
}
