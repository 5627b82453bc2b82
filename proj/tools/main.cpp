#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::cout.imbue(std::locale::classic());
  return polya_aeppli::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
