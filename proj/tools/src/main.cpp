#include <iostream>

#include "mmf/cli/commands.hpp"

int main(int argc, char** argv) { return mmf::cli::run(argc, argv, std::cout, std::cerr); }
