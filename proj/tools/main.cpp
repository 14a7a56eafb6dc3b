#include <iostream>
#include <string>
#include <vector>

#include "bden/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bden::dispatch(args, std::cout, std::cerr);
}
