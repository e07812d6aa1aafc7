#include "lich/cli.hpp"

int main(int argc, char** argv) { return lich::cli::main(argc, argv); }
