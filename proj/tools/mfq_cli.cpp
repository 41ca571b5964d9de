#include <iostream>

#include "mfq/cli/commands.hpp"

int main(int argc, char** argv) { return mfq::cli::run_cli(argc, argv, std::cout, std::cerr); }
