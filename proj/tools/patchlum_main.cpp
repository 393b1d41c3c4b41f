#include <string>
#include <vector>

#include "patchlum/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return patchlum::run_cli(args);
}
