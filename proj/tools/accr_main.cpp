#include <iostream>

#include "accr/cli.hpp"

int main(int argc, char** argv) { return accr::run_cli(argc, argv, std::cout, std::cerr); }
