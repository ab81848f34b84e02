#include <iostream>
#include <string>
#include <vector>

#include "bqst/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bqst::cli::run(std::move(args), std::cout, std::cerr);
}
