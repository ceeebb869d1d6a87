#include <iostream>

#include "finprep/cli.hpp"

int main(int argc, char** argv) { return finprep::cli_main(argc, argv, std::cout, std::cerr); }
