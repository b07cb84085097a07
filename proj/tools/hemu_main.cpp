#include "hemu/cli.hpp"

int main(int argc, char** argv) { return hemu::run_cli(argc, argv); }
