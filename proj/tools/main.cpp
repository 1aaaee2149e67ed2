#include <iostream>
#include <string>
#include <vector>

#include "pachner4/cli.hpp"

int main(int argc, char** argv) {
  return pachner4::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
