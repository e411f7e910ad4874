#include <string>
#include <vector>

#include "qtwist/cli.hpp"

int main(int argc, char** argv) {
  return qtwist::cli::run(std::vector<std::string>(argv, argv + argc));
}
