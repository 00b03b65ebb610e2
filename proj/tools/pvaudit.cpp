#include "pvaudit/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return pvaudit::cli::run(args, std::cout, std::cerr, pvaudit::cli::Environment::from_process());
}
