#include <string>
#include <vector>

#include "clonedecomp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return clonedecomp::run_cli(args);
}
