#include "bfw/cli.hpp"

int main(int argc, char** argv) { return bfw::cli_main(argc, argv); }
