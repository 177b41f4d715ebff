#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cachemodel::cli::run(argc, argv, std::cout, std::cerr);
}
