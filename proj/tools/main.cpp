#include <iostream>

#include "tinynose/cli.hpp"

int main(int argc, char** argv) { return tinynose::run_cli(argc, argv, std::cout, std::cerr); }
