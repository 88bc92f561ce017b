#include <iostream>
#include <string>
#include <vector>

#include "attn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return attn::run(args, std::cout, std::cerr);
}
