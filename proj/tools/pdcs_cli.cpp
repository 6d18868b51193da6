#include <iostream>

#include "pdcs/cli.hpp"

int main(int argc, char** argv) { return pdcs::cli_main(argc, argv, std::cout, std::cerr); }
