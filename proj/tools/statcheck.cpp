#include <iostream>

#include "statute/cli.hpp"

int main(int argc, char** argv) {
  return statute::dispatch(argc, argv, std::cout, std::cerr);
}
