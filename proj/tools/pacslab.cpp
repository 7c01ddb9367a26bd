#include <iostream>
#include <string>
#include <vector>

#include "pacslab/cli/scenarios.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pacslab::cli::main_entry(args, std::cout, std::cerr);
}
