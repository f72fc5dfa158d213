#include <iostream>

#include "nnintra/cli.hpp"

int main(int argc, char** argv) { return nnintra::cli_main(argc, argv, std::cout, std::cerr); }
