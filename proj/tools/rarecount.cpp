#include "rarecount/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return rarecount::cli::run(argc, argv, std::cout, std::cerr);
}
