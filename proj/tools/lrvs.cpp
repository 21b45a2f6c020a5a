#include <iostream>

#include "lrvs/cli.hpp"

int main(int argc, char** argv) { return lrvs::run_cli(argc, argv, std::cout, std::cerr); }
