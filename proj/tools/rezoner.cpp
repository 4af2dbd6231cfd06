#include <iostream>

#include "rezoner/cli.hpp"

int main(int argc, char** argv) { return rezoner::cli::run(argc, argv, std::cout, std::cerr); }
