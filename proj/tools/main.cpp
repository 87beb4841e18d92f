#include <string>
#include <vector>

#include "lionman/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lionman::cli_main(args);
}
