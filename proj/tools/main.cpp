#include "noether/cli.hpp"

int main(int argc, char** argv) { return noether::cli::run_cli(argc, argv); }
