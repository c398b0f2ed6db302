#include "spiral/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spiral::run_cli(argc, argv, std::cout, std::cerr); }
