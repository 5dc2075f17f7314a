#include <string>
#include <vector>

#include "skelxai/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return skelxai::run_cli(args);
}
