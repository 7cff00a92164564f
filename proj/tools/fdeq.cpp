#include <iostream>
#include <vector>

#include "fde/cli_run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fde::cli_run(args, std::cout, std::cerr);
}
