#include "isr/cli.hpp"

int main(int argc, char** argv) { return isr::cli_main(argc, argv); }
