#include <iostream>

#include "medrep/commands.hpp"

int main(int argc, char** argv) { return medrep::cli::main(argc, argv, std::cout, std::cerr); }
