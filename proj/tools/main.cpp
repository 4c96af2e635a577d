#include <iostream>

#include "chsolver/cli.hpp"

int main(int argc, char** argv) { return chs::cli_main(argc, argv, std::cout, std::cerr); }
