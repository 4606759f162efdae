#include <string>
#include <vector>

#include "shiftscan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shiftscan::cli::run(args);
}
