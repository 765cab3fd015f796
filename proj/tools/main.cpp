#include <iostream>

#include "prwf/cli.hpp"

int main(int argc, char** argv) { return prwf::run_cli(argc, argv, std::cout, std::cerr); }
