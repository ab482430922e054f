#include "arakelov/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return arakelov::cli::run(argc, argv, std::cout, std::cerr); }
