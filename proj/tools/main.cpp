#include <iostream>

#include "freehardy/cli.hpp"

int main(int argc, char** argv) { return freehardy::cli::run(argc, argv, std::cout, std::cerr); }
