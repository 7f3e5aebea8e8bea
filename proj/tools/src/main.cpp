#include <iostream>

#include "spinsurf/cli.hpp"

int main(int argc, char** argv) {
  return spinsurf::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
