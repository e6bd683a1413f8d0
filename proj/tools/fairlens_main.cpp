#include <iostream>

#include "fairlens/cli.hpp"

int main(int argc, char** argv) {
  return fairlens::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
