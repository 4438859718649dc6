#include <iostream>

#include "seamlab/cli.hpp"

int main(int argc, char** argv) {
    return seamlab::cli_main(argc, argv, std::cout, std::cerr);
}
