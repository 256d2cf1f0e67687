#include <iostream>

#include "mcfair/cli.hpp"

int main(int argc, char** argv) { return mcfair::cli::run(argc, argv, std::cout, std::cerr); }
