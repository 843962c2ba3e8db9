#include <iostream>
#include <string>
#include <vector>

#include "cpulse_cli.hpp"

int main(int argc, char** argv) {
  return cpulse::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
