#include "wagefloor/cli.hpp"

int main(int argc, char** argv) { return wagefloor::cli_main(argc, argv); }
