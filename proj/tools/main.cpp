#include "splap/cli.hpp"

int main(int argc, char** argv) { return splap::run_cli(argc, argv); }
