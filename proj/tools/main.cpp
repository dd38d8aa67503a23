#include <iostream>
#include <string>
#include <vector>

#include "uvgb/cli.hpp"

int main(int argc, char** argv) {
    return uvgb::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
