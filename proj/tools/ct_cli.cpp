#include <iostream>

#include "ct/cli.hpp"

int main(int argc, char** argv) { return ct::run_cli(argc, argv, std::cout, std::cerr); }
