#include "bilatsim/cli.hpp"

int main(int argc, char** argv) {
    return bilatsim::cli_main(argc, argv);
}
