#include <iostream>
#include <vector>

#include "dbd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dbd::run_cli(args, std::cout, std::cerr);
}
