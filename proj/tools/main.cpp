#include "boundedrat/cli.hpp"

int main(int argc, char** argv) { return boundedrat::run_cli(argc, argv); }
