#include <iostream>

#include "defocus/cli.hpp"

int main(int argc, char** argv) { return defocus::run_cli(argc, argv, std::cout, std::cerr); }
