#include "seqcast/cli.hpp"

int main(int argc, char** argv) { return seqcast::cli::run_cli(argc, argv); }
