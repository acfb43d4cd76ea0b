#include "balint/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return balint::cli::run_cli(argc, argv, std::cout, std::cerr);
}
