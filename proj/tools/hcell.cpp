#include <iostream>

#include "hcell/cli.hpp"

int main(int argc, char** argv) { return hcell::cli::main_entry(argc, argv, std::cout); }
