#include <iostream>

#include "mosquito/cli.h"

int main(int argc, char** argv) {
  return mosquito::cli::run(argc, argv, std::cout, std::cerr);
}
