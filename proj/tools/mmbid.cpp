#include "mmbid/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return mmbid::cli::run_main(argc, argv, std::cout, std::cerr); }
