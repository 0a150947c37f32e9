#include <iostream>

#include "affine2f/cli.hpp"

int main(int argc, char** argv) { return affine2f::run_cli(argc, argv, std::cout, std::cerr); }
