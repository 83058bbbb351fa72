#include "corridorlab/cli.hpp"

int main(int argc, char** argv) { return corridorlab::run_cli(argc, argv); }
