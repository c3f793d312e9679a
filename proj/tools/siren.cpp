#include "siren/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return siren::run_cli(argc, argv, std::cout, std::cerr); }
