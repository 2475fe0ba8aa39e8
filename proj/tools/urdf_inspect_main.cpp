#include "urdf_inspect/cli.hpp"

int main(int argc, char** argv) {
    return urdf_inspect::run_cli(argc, argv);
}
