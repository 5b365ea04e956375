#include <vector>

#include "depnet/cli.hpp"

int main(int argc, char** argv) {
    return depnet::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
