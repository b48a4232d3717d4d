#include <iostream>

#include "mcg/cli.hpp"

int main(int argc, char** argv) { return mcg::cli::run(argc, argv, std::cout, std::cerr); }
