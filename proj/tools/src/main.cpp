#include <iostream>

#include "sevrel/cli.hpp"

int main(int argc, char** argv) {
    return sevrel::cli::run(argc, argv, std::cout, std::cerr);
}
