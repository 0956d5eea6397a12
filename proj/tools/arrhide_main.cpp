#include <iostream>
#include <string>
#include <vector>

#include "arrhide/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return arrhide::runCli(args, std::cout, std::cerr);
}
