#include "sensekit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sensekit::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
