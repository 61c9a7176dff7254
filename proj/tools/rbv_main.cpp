#include "rbv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rbv::run_cli(argc, argv, std::cout, std::cerr); }
