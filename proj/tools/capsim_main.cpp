#include "capsim/cli.hpp"

int main(int argc, char** argv) { return capsim::run_cli(argc, argv); }
