#include "kograd/cli.hpp"

int main(int argc, char** argv) { return kograd::run_cli(argc, argv); }
