#include <iostream>

#include "compass/cli/commands.hpp"

int main(int argc, char** argv) { return compass::run_cli(argc, argv, std::cout, std::cerr); }
