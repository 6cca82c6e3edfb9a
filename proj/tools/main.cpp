#include "svine/cli.hpp"

int main(int argc, char** argv) { return svine::run_cli(argc, argv); }
