#include <iostream>
#include <string>
#include <vector>

#include "refpred/cli/commands.hpp"

int main(int argc, char** argv) {
  return refpred::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
