#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return partmix::cli::run(argc, argv, std::cout, std::cerr); }
