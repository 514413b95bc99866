#include <iostream>
#include <string>
#include <vector>

#include "odmetric/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return odmetric::RunCli(args, std::cout, std::cerr);
}
