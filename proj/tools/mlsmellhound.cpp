#include <iostream>
#include <string>
#include <vector>

#include "mlsmellhound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mlsmellhound::cli::run(std::move(args), std::cout, std::cerr);
}
