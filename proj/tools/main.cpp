#include <string>
#include <vector>

#include "viaplan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return viaplan::cli_run(args);
}
