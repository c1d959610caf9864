#include <iostream>

#include "mwd/cli.hpp"

int main(int argc, char** argv) { return mwd::cli::run(argc, argv, std::cout, std::cerr); }
