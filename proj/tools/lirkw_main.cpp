#include <iostream>
#include <string>
#include <vector>

#include "lirkw/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lirkw::cli::run(args, std::cout, std::cerr);
}
