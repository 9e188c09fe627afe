#include <iostream>
#include <string>
#include <vector>

#include "trafficast_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trafficast::cli::run(args, std::cout, std::cerr);
}
