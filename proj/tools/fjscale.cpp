#include <iostream>
#include <string>
#include <vector>

#include "fjscale/cli.hpp"

int main(int argc, char** argv) {
  return fjscale::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
