#include "dfae/cli.hpp"

int main(int argc, char** argv) { return dfae::run_cli(argc, argv); }
