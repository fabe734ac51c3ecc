#include "expdyn/cli.hpp"

int main(int argc, char** argv) { return expdyn::run_cli(argc, argv); }
