#include <iostream>
#include <string>
#include <vector>

#include "rcv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rcv::run_cli(args, std::cout, std::cerr);
}
