#include <iostream>

#include "qwalk/cli/commands.hpp"

int main(int argc, char** argv) {
    return qwalk::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
