#include "inflap/cli.hpp"

int main(int argc, char** argv) { return inflap::run_cli(argc, argv); }
