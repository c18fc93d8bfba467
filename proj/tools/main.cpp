#include <iostream>

#include "hermes/cli/cli.hpp"

int main(int argc, char** argv) {
  return hermes::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
