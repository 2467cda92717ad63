#include <iostream>
#include <string>
#include <vector>

#include "skycat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return skycat::run_cli(args, std::cout, std::cerr);
}
