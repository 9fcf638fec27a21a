#include <iostream>

#include "mds/cli.hpp"

int main(int argc, char** argv) { return mds::run_cli(argc, argv, std::cout, std::cerr); }
