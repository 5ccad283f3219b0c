#include <iostream>
#include <string>
#include <vector>

#include "promptaug/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return promptaug::cli::run(args, std::cout, std::cerr);
}
