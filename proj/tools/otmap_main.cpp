#include <vector>

#include "otmap/cli.hpp"

int main(int argc, char** argv) {
  return otmap::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
