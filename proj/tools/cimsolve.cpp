#include <iostream>

#include "cimsolve/cli.hpp"

int main(int argc, char** argv) { return cimsolve::run_cli(argc, argv, std::cout, std::cerr); }
