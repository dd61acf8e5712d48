#include "largen/cli.hpp"

int main(int argc, char** argv) { return largen::cli::run_cli(argc, argv); }
