#include <iostream>

#include "lrquench/cli.hpp"

int main(int argc, char** argv) { return lrq::run_cli(argc, argv, std::cout, std::cerr); }
