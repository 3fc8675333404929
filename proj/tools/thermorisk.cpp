#include <iostream>

#include "thermorisk/cli.hpp"

int main(int argc, char** argv) {
  return thermorisk::cli::run_cli(argc, argv, std::cout, std::cerr);
}
