#include <vector>

#include "clr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return clr::run_cli(args);
}
