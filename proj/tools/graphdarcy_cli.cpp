#include "graphdarcy/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return graphdarcy::run_cli(argc, argv, std::cout, std::cerr); }
