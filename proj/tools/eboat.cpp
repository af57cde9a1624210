#include "eboat/cli.hpp"

int main(int argc, char** argv) {
    return eboat::cli::run_cli(argc, argv);
}
