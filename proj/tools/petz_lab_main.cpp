#include "petzlab/cli.hpp"

int main(int argc, char** argv) { return petzlab::cli_main(argc, argv); }
