#include <iostream>

#include "svs/cli.hpp"

int main(int argc, char** argv) { return svs::run_cli(argc, argv, std::cout, std::cerr); }
