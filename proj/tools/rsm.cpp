#include <iostream>

#include "rsm/cli.hpp"

int main(int argc, char** argv) {
  return rsm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
